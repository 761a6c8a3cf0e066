#include "cli_commands.hpp"

int main(int argc, char** argv) { return dbo::cli::run(argc, argv); }
