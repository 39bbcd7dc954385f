#pragma once

#include <cstdio>
#include <string>

namespace sir {

// Full-precision decimal rendering (17 significant digits round-trips a
// double exactly), used everywhere CSV or scenario files are written so
// outputs are byte-stable and lossless.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace sir
