#pragma once

#include <string>

#include "flb/measures.hpp"
#include "flb/spectrum.hpp"

namespace flb {

// Exact finite-n bounds evaluated on an n-fold spectrum of t = log(P/Q).
// For secret-key quantities the pair is (P_AE, P_E) and the relevant
// variable is X = -t; the routines below handle the orientation.

enum class BoundKind { upper, lower, exact };
const char* to_string(BoundKind k);

struct BoundResult {
    double value = 0.0;  // nats
    BoundKind kind = BoundKind::exact;
    std::string task;
    std::string name;
    int n = 1;
    double eps = 0.0;
    double aux = 0.0;  // split parameter or optimizing theta, when any
};

// P{X <= m} - e^{-m} Q{X <= m}.
double delta_min(double m, const LlrSpectrum& s);

// sup{m : delta_min(m) <= eps}
double hmin_smooth_eps(const LlrSpectrum& s, double eps);

// max{m' : min_m delta_min(m) + e^{(m'-m)/2} / 2 <= eps}
double ell_min_eps(const LlrSpectrum& s, double eps);

// max over m' with some threshold m such that
// P{X <= m} + e^{m'/2} sqrt(mu{X > m}) / 2 <= eps, mu = P^2/Q.
double ell_2_eps(const LlrSpectrum& s, double eps);

// Optimal randomized Neyman-Pearson type-II error at type-I level eps.
double log_beta_eps(const LlrSpectrum& s, double eps);
double beta_eps(const LlrSpectrum& s, double eps);
double d_h_eps(const LlrSpectrum& s, double eps);

// max{m' : min_m P{t <= m} + e^{m'} Q{t > m} <= eps}
double d_dt_eps(const LlrSpectrum& s, double eps);

// Spectral entropy: sup{m : P{X <= m} <= eps}, the smallest support point
// where the CDF of X exceeds eps.
double h_sp_eps(const LlrSpectrum& s, double eps);

// Conditional Renyi entropy -1/theta log sum P^{1+theta} R^{-theta}.
double renyi_cond(const JointMeasure& j, const DiscreteMeasure& r, double order);
double renyi_cond(const LlrSpectrum& s, double theta);

struct LegacySplits {
    double eta = -1.0;   // default eps/2
    double zeta = -1.0;  // default eps/2
    int theta_points = 1024;
    double theta_min = 1e-6;
};

struct LegacyBounds {
    double w1_lower = 0, w1_upper = 0, w2_lower = 0, w3_lower = 0;
    double w2_theta = 0, w3_theta = 0;
};

// Comparison bounds from the spectral entropy and the conditional Renyi
// entropy. order1 is the single-letter spectrum of spec_n.
LegacyBounds legacy_bounds_w(const LlrSpectrum& order1, const LlrSpectrum& spec_n, double eps,
                             const LegacySplits& splits = {});

// Sacrifice length log|A| - ell.
double sacrifice(double log_alphabet, double ell);

struct SacrificeCheck {
    double s_min = 0, s_2 = 0;
    bool holds = false;  // s_min >= s_2
};
SacrificeCheck sacrifice_check(const LlrSpectrum& s, double log_alphabet, double eps);

}  // namespace flb
