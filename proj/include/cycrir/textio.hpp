#pragma once

#include <cstdio>
#include <string>

namespace cycrir {

/// Round-trip-safe decimal rendering (17 significant digits, '.' decimal).
inline std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Short rendering for human-facing flag strings.
inline std::string format_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

}  // namespace cycrir
