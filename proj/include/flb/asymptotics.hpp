#pragma once

#include <string>

#include "flb/measures.hpp"
#include "flb/quantities.hpp"
#include "flb/spectrum.hpp"

namespace flb {

enum class Direction { upper, lower, equality };
const char* to_string(Direction d);

// a1 n + a2 sqrt(n) + a3 log n + a4
struct Expansion {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    Direction direction = Direction::equality;
    double at(double n) const;
    // a1 n + a2 sqrt(n)
    double second_order(double n) const;
};

struct TailEstimate {
    double chi0_n = 0, half_log_n = 0, chi1 = 0;
    double log_value = 0;
};

// Phi(x) - phi(x) kappa (x^2 - 1) / (6 sqrt n)
double edgeworth_cdf(double n, double x, double kappa);

// log P{X_1 + ... + X_n >= nR}, R above the mean of the CGF's variable.
TailEstimate bahadur_rao_log_tail(const CgfView& cgf, const LatticeInfo& lattice, double R, double n);

// log P{X_1 + ... + X_n >= n(R0 + R1/sqrt n + R2/n)} with tau'(s0) = R0.
double shifted_log_tail(const CgfView& cgf, const LatticeInfo& lattice, double s0, double R1,
                       double R2, double n);

struct SrngExpansions {
    Expansion gs1, gs2, gs3;
};
SrngExpansions expand_srng(const DivergenceStats& st, double eps);
SrngExpansions expand_srng(const JointMeasure& j, double eps);

struct HtExpansions {
    Expansion dh, ddt;
};
HtExpansions expand_ht(const DivergenceStats& st, double eps, FForm form = FForm::derived);
HtExpansions expand_ht(const DiscreteMeasure& p, const DiscreteMeasure& q, double eps,
                       FForm form = FForm::derived);

struct BoundPair {
    Expansion lower, upper;
};

// log of the minimal source code size at error eps, against the counting measure.
Expansion expand_source(const DiscreteMeasure& p_x, double eps, FForm form = FForm::derived);
// With side information Y: lower from -D_h, upper from -D_DT of (P_XY || P_Y).
BoundPair expand_source_side(const JointMeasure& j_xy, double eps, FForm form = FForm::derived);

}  // namespace flb
