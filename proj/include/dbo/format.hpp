#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace dbo {

/// 12 significant digits, '.' decimal separator, no grouping. Locale independent
/// as long as the process runs in the "C" numeric locale (the default).
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Same digits as format_number, but JSON-safe (non-finite values become null).
inline std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

}  // namespace dbo
