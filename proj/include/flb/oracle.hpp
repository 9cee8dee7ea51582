#pragma once

// Brute-force reference implementations. They work on plain sequence lists
// in the linear domain and share no code with the spectrum routines, so they
// are usable as independent checks for small n.

#include <vector>

namespace flb::oracle {

// Every length-n sequence over a small alphabet with its P- and Q-mass.
struct Sequences {
    std::vector<double> p, q;
    // log(P/Q); -inf where P = 0, +inf where Q = 0
    std::vector<double> t;
};
Sequences enumerate(const std::vector<double>& p1, const std::vector<double>& q1, int n);

// Sum over {-t <= m} of (P - e^{-m} Q).
double delta_min(const Sequences& s, double m);
// sup{m : delta_min(m) <= eps} by bisection.
double hmin_smooth(const Sequences& s, double eps);
// Outer bisection on m', inner minimum over m on knots plus a dense grid.
double ell_min(const Sequences& s, double eps, int grid = 20000);
// Maximum over every threshold set {-t <= m} of the order-2 key length.
double ell_2(const Sequences& s, double eps);
// Maximum over every threshold set {t <= m} of log(eps - P) - log Q(rest).
double d_dt(const Sequences& s, double eps);

// Type-II error of the optimal randomized test through the dual
// max_l [l (1 - eps) - sum_x max(0, l P(x) - Q(x))], evaluated at all breakpoints.
double beta_dual(const Sequences& s, double eps);
// Same quantity by walking every deterministic acceptance set together with
// every single randomized boundary outcome. Only for a handful of outcomes.
double beta_exhaustive(const Sequences& s, double eps);

// CDF P{sum of n i.i.d. draws <= x} for a three-point law, summed over types
// within 12 standard deviations of the mean.
double trinomial_cdf(const double p[3], const double v[3], int n, double x);

// Binomial law of n draws taking value v1 with probability p and v0 otherwise.
struct Binomial {
    int n;
    double p, v0, v1;
    double log_mass(int k) const;  // k draws of v1
    double value(int k) const { return (n - k) * v0 + k * v1; }
    // P{sum <= x} with values within tol of x counted as equal.
    double cdf(double x, double tol = 1e-9) const;
};

}  // namespace flb::oracle
