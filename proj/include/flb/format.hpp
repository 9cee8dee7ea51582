#pragma once

#include <string>

namespace flb {

// printf "%.12g"; infinities as inf / -inf.
std::string fmt_g12(double x);

// Formats e^{log_value} with 12 significant digits, falling back to a
// decimal mantissa/exponent pair when the value leaves the double range.
std::string fmt_exp_of(double log_value);

}  // namespace flb
