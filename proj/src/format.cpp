#include "flb/format.hpp"

#include <cmath>
#include <cstdio>

namespace flb {

std::string fmt_g12(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_exp_of(double log_value) {
    if (std::isinf(log_value) && log_value < 0) return "0";
    if (std::abs(log_value) < 700.0) return fmt_g12(std::exp(log_value));
    double l10 = log_value / std::log(10.0);
    double e = std::floor(l10);
    double mant = std::pow(10.0, l10 - e);
    if (mant >= 10.0) {
        mant /= 10.0;
        e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11fe%+.0f", mant, e);
    return buf;
}

}  // namespace flb
