#pragma once

#include <cstdio>
#include <string>

namespace cavspin {

// 17 significant digits in scientific notation; round-trips any double.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

}  // namespace cavspin
