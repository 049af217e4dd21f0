#pragma once

#include <cstdio>
#include <string>

namespace lbc {

/// Render a double with 17 significant digits (round-trip exact).
inline std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace lbc
