#pragma once

// Command implementations for the dbo command-line tool. Kept in a header so the
// test suite can drive them in process.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbo/dbo.hpp"

namespace dbo::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Bad user input: reported on stderr, exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "8", "10..60", "10..60:10" and comma-separated mixtures of those.
inline std::vector<std::size_t> parse_index_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    auto to_uint = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError(what + ": '" + s + "' is not a non-negative integer");
        }
        return static_cast<std::size_t>(std::stoull(s));
    };
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_uint(item));
            continue;
        }
        std::string hi_part = item.substr(dots + 2);
        std::size_t step = 1;
        if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
            step = to_uint(hi_part.substr(colon + 1));
            hi_part = hi_part.substr(0, colon);
        }
        const auto lo = to_uint(item.substr(0, dots)), hi = to_uint(hi_part);
        if (step == 0 || lo > hi) throw UsageError(what + ": bad range '" + item + "'");
        for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    }
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

inline std::vector<std::size_t> parse_n_list(const std::string& text) {
    auto ns = parse_index_list(text, "--N");
    for (auto n : ns)
        if (n < 2) throw UsageError("--N: every N must be >= 2, got " + std::to_string(n));
    return ns;
}

inline std::vector<std::size_t> parse_k_list(const std::string& text) {
    auto ks = parse_index_list(text, "--k");
    for (auto k : ks)
        if (k < 1) throw UsageError("--k: indices start at 1");
    return ks;
}

/// Numbers rounded to the 12 significant digits used in CSV, so both formats agree.
inline nlohmann::json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v).c_str(), nullptr);
}

/// Relative --out paths are placed under $DBO_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output(const std::string& out) {
    std::filesystem::path p(out);
    if (const char* dir = std::getenv("DBO_OUTPUT_DIR"); dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
    return p;
}

struct Common {
    std::string format = "csv";
    std::string out;
};

inline void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    const auto path = resolve_output(c.out);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file " + path.string());
    f << text;
    if (!f) throw UsageError("failed writing " + path.string());
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    return s + "\n";
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Reads whitespace- or comma-separated numbers.
inline std::vector<double> read_values(const std::string& path, const std::string& what) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + what + " file '" + path + "'");
    std::vector<double> v;
    std::string tok;
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    for (char& ch : text)
        if (ch == ',') ch = ' ';
    std::istringstream in(text);
    while (in >> tok) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(x)) throw UsageError(what + " file: malformed value '" + tok + "'");
        v.push_back(x);
    }
    return v;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveOptions {
    Common common;
    std::size_t n = 10;
    std::string forcing = "const24";
    std::string file;
};

inline int cmd_solve(const SolveOptions& o, std::ostream& out) {
    if (o.n < 2) throw UsageError("--N must be >= 2");
    const Grid g(o.n);
    const double pi = std::numbers::pi;
    std::vector<double> f(g.size(), 0.0);
    std::optional<std::function<double(double)>> exact;
    if (o.forcing == "const24") {
        std::fill(f.begin(), f.end(), 24.0);
        exact = [](double x) { return x * x * (1 - x) * (1 - x); };
    } else if (o.forcing == "cos2pi") {
        for (std::size_t j = 0; j < f.size(); ++j) f[j] = -8 * std::pow(pi, 4) * std::cos(2 * pi * g.node(j));
        exact = [pi](double x) { return (1 - std::cos(2 * pi * x)) / 2; };
    } else if (o.forcing == "zero") {
        exact = [](double) { return 0.0; };
    } else if (o.forcing == "file") {
        if (o.file.empty()) throw UsageError("--forcing file needs --file PATH");
        f = read_values(o.file, "forcing");
        if (f.size() != g.size()) {
            throw UsageError("forcing file: expected N+1 = " + std::to_string(g.size()) + " values, got " +
                             std::to_string(f.size()));
        }
    } else {
        throw UsageError("unknown forcing '" + o.forcing + "'");
    }
    // boundary entries of f do not enter the interior equations
    const auto u = solve_biharmonic(HomogeneousGridFunction::homogeneous_part(GridFunction(g, f)));

    double max_err = exact ? 0.0 : NAN;
    std::string csv = "x,u,u_exact,error\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        const double ue = exact ? (*exact)(x) : NAN;
        const double err = exact ? std::abs(u[j] - ue) : NAN;
        if (exact) max_err = std::max(max_err, err);
        csv += csv_row({format_number(x), format_number(u[j]), exact ? format_number(ue) : "",
                        exact ? format_number(err) : ""});
        rows.push_back({{"x", jnum(x)}, {"u", jnum(u[j])}, {"u_exact", jnum(ue)}, {"error", jnum(err)}});
    }
    if (o.common.format == "json") {
        emit(o.common,
             dump({{"command", "solve"}, {"N", o.n}, {"forcing", o.forcing}, {"max_error", jnum(max_err)}, {"rows", rows}}),
             out);
    } else {
        emit(o.common, csv, out);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// eigs
// ---------------------------------------------------------------------------

struct EigsOptions {
    Common common;
    std::string ns = "10,20,30,40,50,60";
    std::string ks = "1,2,3,4";
};

inline int cmd_eigs(const EigsOptions& o, std::ostream& out) {
    const auto ns = parse_n_list(o.ns);
    const auto ks = parse_k_list(o.ks);
    const auto kmax = *std::max_element(ks.begin(), ks.end());
    for (auto n : ns)
        if (kmax > n - 1) {
            throw UsageError("k = " + std::to_string(kmax) + " exceeds N-1 = " + std::to_string(n - 1) +
                             " (the grid has N-1 eigenvalues)");
        }
    const auto cs = continuous_spectrum(kmax);

    std::vector<std::string> header{"N"};
    for (auto k : ks) header.push_back("lambda_" + std::to_string(k));
    std::string csv = csv_row(header);
    std::vector<std::string> cont{"continuous"};
    nlohmann::json jcont = nlohmann::json::array();
    for (auto k : ks) {
        cont.push_back(format_number(cs.lambda(k)));
        jcont.push_back(jnum(cs.lambda(k)));
    }
    csv += csv_row(cont);
    nlohmann::json rows = nlohmann::json::array();
    for (auto n : ns) {
        const auto ds = discrete_spectrum(Grid(n));
        std::vector<std::string> row{std::to_string(n)};
        nlohmann::json vals = nlohmann::json::array();
        for (auto k : ks) {
            row.push_back(format_number(ds.lambda(k)));
            vals.push_back(jnum(ds.lambda(k)));
        }
        csv += csv_row(row);
        rows.push_back({{"N", n}, {"lambda_h", vals}});
    }
    if (o.common.format == "json") {
        emit(o.common, dump({{"command", "eigs"}, {"k", ks}, {"continuous", jcont}, {"rows", rows}}), out);
    } else {
        emit(o.common, csv, out);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct ConvergeOptions {
    Common common;
    std::string ks = "1";
    std::string ns = "10..60";
    std::vector<double> band{-4.3, -3.7};
};

inline int cmd_converge(const ConvergeOptions& o, std::ostream& out, std::ostream& err) {
    auto ns = parse_n_list(o.ns);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 3) throw UsageError("converge needs at least 3 distinct N values to fit a slope");
    if (o.band.size() != 2 || !(o.band[0] <= o.band[1])) throw UsageError("--band needs LO HI with LO <= HI");
    const auto ks = parse_k_list(o.ks);
    const auto kmax = *std::max_element(ks.begin(), ks.end());
    if (kmax > ns.front() - 1) {
        throw UsageError("k = " + std::to_string(kmax) + " exceeds N-1 = " + std::to_string(ns.front() - 1));
    }
    const auto rep = convergence_study(ks, ns);

    bool ok = true;
    std::string csv = "N,k,lambda,lambda_h,abs_error,rel_error\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        csv += csv_row({std::to_string(r.n), std::to_string(r.k), format_number(r.lambda), format_number(r.lambda_h),
                        format_number(r.abs_error), format_number(r.rel_error)});
        rows.push_back({{"N", r.n},
                        {"k", r.k},
                        {"lambda", jnum(r.lambda)},
                        {"lambda_h", jnum(r.lambda_h)},
                        {"abs_error", jnum(r.abs_error)},
                        {"rel_error", jnum(r.rel_error)}});
    }
    csv += "\nk,slope,band_lo,band_hi,within_band\n";
    nlohmann::json slopes = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.ks.size(); ++i) {
        const double s = rep.slopes[i];
        const bool in = s >= o.band[0] && s <= o.band[1];
        ok = ok && in;
        csv += csv_row({std::to_string(rep.ks[i]), format_number(s), format_number(o.band[0]), format_number(o.band[1]),
                        in ? "true" : "false"});
        slopes.push_back({{"k", rep.ks[i]}, {"slope", jnum(s)}, {"within_band", in}});
        if (!in) err << "slope " << format_number(s) << " for k = " << rep.ks[i] << " outside band\n";
    }
    if (o.common.format == "json") {
        emit(o.common,
             dump({{"command", "converge"},
                   {"band", {jnum(o.band[0]), jnum(o.band[1])}},
                   {"rows", rows},
                   {"slopes", slopes}}),
             out);
    } else {
        emit(o.common, csv, out);
    }
    return ok ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
    Common common;
    std::uint64_t seed = 42;
    std::string ns = "4,8,16,32";
    std::size_t cases = 250;
    double tolerance_scale = 1.0;
    std::string fault;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    VerifyConfig cfg;
    cfg.ns = parse_n_list(o.ns);
    cfg.seed = o.seed;
    cfg.cases_per_n = o.cases;
    if (!(o.tolerance_scale > 0.0)) throw UsageError("--tolerance-scale must be positive");
    cfg.tolerance_scale = o.tolerance_scale;
    if (o.fault == "kernel-sign") {
        cfg.fault = Fault::kernel_sign_flip;
    } else if (!o.fault.empty()) {
        throw UsageError("unknown fault '" + o.fault + "'");
    }
    const auto results = run_verification(cfg);

    std::string first;
    std::string csv = "suite,passed,cases,worst,tolerance\n";
    nlohmann::json suites = nlohmann::json::array();
    for (const auto& r : results) {
        csv += csv_row({r.name, r.passed ? "true" : "false", std::to_string(r.cases), format_number(r.worst),
                        format_number(r.tolerance)});
        suites.push_back({{"suite", r.name},
                          {"passed", r.passed},
                          {"cases", r.cases},
                          {"worst", jnum(r.worst)},
                          {"tolerance", jnum(r.tolerance)}});
        if (!r.passed && first.empty()) first = r.counterexample;
    }
    nlohmann::json doc{{"command", "verify"}, {"seed", o.seed}, {"suites", suites}};
    doc["counterexample"] = first.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(first);
    if (!first.empty()) err << "counterexample: " << first << "\n";
    emit(o.common, o.common.format == "json" ? dump(doc) : csv, out);
    return first.empty() ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// spline
// ---------------------------------------------------------------------------

struct SplineOptions {
    Common common;
    std::size_t n = 8;
    std::string data = "quartic";
    std::string file;
    std::size_t samples = 101;
};

inline int cmd_spline(const SplineOptions& o, std::ostream& out) {
    if (o.n < 2) throw UsageError("--N must be >= 2");
    if (o.samples < 2) throw UsageError("--samples must be >= 2");
    const Grid g(o.n);
    std::vector<double> v;
    if (o.data == "quartic") {
        v = sample(g, [](double x) { return x * x * (1 - x) * (1 - x); }).interior();
    } else if (o.data == "sin2") {
        v = sample(g, [](double x) { return std::pow(std::sin(std::numbers::pi * x), 2); }).interior();
    } else if (o.data == "beam1") {
        const auto phi = eigenfunction(find_beam_root(1).beta());
        v = sample(g, [&](double x) { return phi(x); }).interior();
    } else if (o.data == "file") {
        if (o.file.empty()) throw UsageError("--data file needs --file PATH");
        auto all = read_values(o.file, "data");
        if (all.size() != g.size()) {
            throw UsageError("data file: expected N+1 = " + std::to_string(g.size()) + " values, got " +
                             std::to_string(all.size()));
        }
        if (all.front() != 0.0 || all.back() != 0.0) throw UsageError("data file: clamped spline needs u_0 = u_N = 0");
        v.assign(all.begin() + 1, all.end() - 1);
    } else {
        throw UsageError("unknown data '" + o.data + "'");
    }
    const auto s = build_spline(HomogeneousGridFunction::from_interior(g, v));

    std::string csv = "x,s,s1,s2\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < o.samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(o.samples - 1);
        const double a = s.eval(x), b = s.eval_d1(x), c = s.eval_d2(x);
        csv += csv_row({format_number(x), format_number(a), format_number(b), format_number(c)});
        rows.push_back({{"x", jnum(x)}, {"s", jnum(a)}, {"s1", jnum(b)}, {"s2", jnum(c)}});
    }
    if (o.common.format == "json") {
        emit(o.common, dump({{"command", "spline"}, {"N", o.n}, {"data", o.data}, {"rows", rows}}), out);
    } else {
        emit(o.common, csv, out);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

struct KernelOptions {
    Common common;
    std::size_t n = 8;
    std::size_t probe = 0;  // 0: dump K^h; otherwise K on a probe x probe grid
};

inline int cmd_kernel(const KernelOptions& o, std::ostream& out) {
    std::string csv;
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json doc{{"command", "kernel"}};
    if (o.probe == 0) {
        if (o.n < 2) throw UsageError("--N must be >= 2");
        const auto kh = assemble_kernel_matrix(Grid(o.n));
        csv = "i,j,Kh\n";
        for (std::size_t i = 1; i < o.n; ++i)
            for (std::size_t j = 1; j < o.n; ++j) {
                csv += csv_row({std::to_string(i), std::to_string(j), format_number(kh.entry(i, j))});
                rows.push_back({{"i", i}, {"j", j}, {"Kh", jnum(kh.entry(i, j))}});
            }
        doc["N"] = o.n;
    } else {
        if (o.probe < 2) throw UsageError("--probe must be >= 2");
        csv = "x,y,K\n";
        const auto m = static_cast<double>(o.probe - 1);
        for (std::size_t i = 0; i < o.probe; ++i)
            for (std::size_t j = 0; j < o.probe; ++j) {
                const double x = static_cast<double>(i) / m, y = static_cast<double>(j) / m;
                csv += csv_row({format_number(x), format_number(y), format_number(kernel_K(x, y))});
                rows.push_back({{"x", jnum(x)}, {"y", jnum(y)}, {"K", jnum(kernel_K(x, y))}});
            }
        doc["probe"] = o.probe;
    }
    doc["rows"] = rows;
    emit(o.common, o.common.format == "json" ? dump(doc) : csv, out);
    return kOk;
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

inline void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "Output file (relative paths go under $DBO_OUTPUT_DIR when set)");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Discrete biharmonic operator toolkit", "dbo_cli"};
    app.require_subcommand(1);

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Solve delta_x^4 u = f with clamped ends");
    add_common(solve, so.common);
    solve->add_option("--N", so.n, "Number of intervals");
    solve->add_option("--forcing", so.forcing, "const24 | cos2pi | zero | file")
        ->check(CLI::IsMember({"const24", "cos2pi", "zero", "file"}));
    solve->add_option("--file", so.file, "Forcing values at the N+1 nodes (with --forcing file)");

    EigsOptions eo;
    auto* eigs = app.add_subcommand("eigs", "Continuous and discrete eigenvalues");
    add_common(eigs, eo.common);
    eigs->add_option("--N", eo.ns, "N values: list, a..b or a..b:step");
    eigs->add_option("--k", eo.ks, "Eigenvalue indices (from 1)");

    ConvergeOptions co;
    auto* conv = app.add_subcommand("converge", "Eigenvalue convergence study with fitted log-log slope");
    add_common(conv, co.common);
    conv->add_option("--k", co.ks, "Eigenvalue indices (from 1)");
    conv->add_option("--N", co.ns, "N values: list, a..b or a..b:step");
    conv->add_option("--band", co.band, "Accepted slope band LO HI")->expected(2);

    VerifyOptions vo;
    auto* ver = app.add_subcommand("verify", "Run the seeded property suites");
    add_common(ver, vo.common);
    ver->add_option("--seed", vo.seed, "Generator seed");
    ver->add_option("--N", vo.ns, "N values: list, a..b or a..b:step");
    ver->add_option("--cases", vo.cases, "Random cases per N and suite");
    ver->add_option("--tolerance-scale", vo.tolerance_scale, "Multiplier applied to every suite tolerance");
    ver->add_option("--inject-fault", vo.fault, "Test mode fault injection")->group("");

    SplineOptions po;
    auto* spl = app.add_subcommand("spline", "Sample the clamped cubic spline and its derivatives");
    add_common(spl, po.common);
    spl->add_option("--N", po.n, "Number of intervals");
    spl->add_option("--data", po.data, "quartic | sin2 | beam1 | file")
        ->check(CLI::IsMember({"quartic", "sin2", "beam1", "file"}));
    spl->add_option("--file", po.file, "Node values u_0..u_N (with --data file)");
    spl->add_option("--samples", po.samples, "Number of uniform sample points");

    KernelOptions ko;
    auto* ker = app.add_subcommand("kernel", "Dump the kernel matrix or the Green's function on a probe grid");
    add_common(ker, ko.common);
    ker->add_option("--N", ko.n, "Number of intervals for K^h");
    ker->add_option("--probe", ko.probe, "Sample K on a probe x probe grid instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*solve) return cmd_solve(so, out);
        if (*eigs) return cmd_eigs(eo, out);
        if (*conv) return cmd_converge(co, out, err);
        if (*ver) return cmd_verify(vo, out, err);
        if (*spl) return cmd_spline(po, out);
        if (*ker) return cmd_kernel(ko, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kVerificationFailed;
    }
    return kUsage;
}

}  // namespace dbo::cli
