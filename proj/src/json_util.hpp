// Tiny JSON emission helpers shared by the report writers.  Output is
// deliberately hand-rolled: every report is a flat one-line object and the
// readers (CLI, CI logs) want stable field order.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace ballproj::detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

// %.17g round-trips doubles; non-finite values become null so the line stays
// valid JSON.
inline std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace ballproj::detail
