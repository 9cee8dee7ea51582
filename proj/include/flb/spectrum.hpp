#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "flb/measures.hpp"

namespace flb {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b) with -inf as the additive identity.
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == neg_inf) return a;
    return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b) for a >= b.
inline double log_sub(double a, double b) {
    if (b == neg_inf) return a;
    if (b >= a) return neg_inf;
    return a + std::log1p(-std::exp(b - a));
}

struct LatticeInfo {
    double span = 0.0;    // 0 means non-lattice
    double offset = 0.0;  // smallest support point
    bool lattice() const { return span > 0.0; }
};

// Raised when a convolution would exceed the configured point or pair budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Distribution of t = log(P/Q) over supp(P), stored as log P-masses.
// The Q-mass of a point is derived as p * e^{-t}, so the change of measure
// holds by construction. Masses of large powers leave the double range, which
// is why everything is kept in the log domain.
class LlrSpectrum {
public:
    LlrSpectrum() = default;
    // t must be strictly increasing. grid, when given, is the lattice the
    // points live on (offset is the n-fold offset).
    LlrSpectrum(std::vector<double> t, std::vector<double> log_p, int n, double log_q_null,
                double log_p_inf = neg_inf, std::optional<LatticeInfo> grid = std::nullopt);

    std::size_t size() const { return t_.size(); }
    bool empty() const { return t_.empty(); }
    int n() const { return n_; }

    double t(std::size_t i) const { return t_[i]; }
    double log_p(std::size_t i) const { return log_p_[i]; }
    double log_q(std::size_t i) const { return log_p_[i] - t_[i]; }
    double p_mass(std::size_t i) const { return std::exp(log_p(i)); }
    double q_mass(std::size_t i) const { return std::exp(log_q(i)); }
    const std::vector<double>& ts() const { return t_; }
    const std::vector<double>& log_ps() const { return log_p_; }

    // Q-mass where P = 0 and P-mass where Q = 0 (the latter only in sentinel mode).
    double log_q_null() const { return log_q_null_; }
    double q_null_mass() const { return std::exp(log_q_null_); }
    double log_p_inf() const { return log_p_inf_; }
    bool has_infinite() const { return log_p_inf_ != neg_inf; }

    // Cumulative sums over indices [0, i] and [i, size).
    double log_p_upto(std::size_t i) const { return pre_p_[i]; }
    double log_q_upto(std::size_t i) const { return pre_q_[i]; }
    double log_p_from(std::size_t i) const { return i < size() ? suf_p_[i] : neg_inf; }
    double log_q_from(std::size_t i) const { return i < size() ? suf_q_[i] : neg_inf; }

    // Totals over the finite points.
    double log_p_total() const { return empty() ? neg_inf : pre_p_.back(); }
    double log_q_total() const { return empty() ? neg_inf : pre_q_.back(); }
    double p_total() const { return std::exp(log_p_total()); }

    const std::optional<LatticeInfo>& grid() const { return grid_; }

    // Throws unless every point has a finite t (no sentinel mass).
    void require_finite(const char* who) const;

private:
    std::vector<double> t_;
    std::vector<double> log_p_;
    std::vector<double> pre_p_, pre_q_, suf_p_, suf_q_;
    int n_ = 1;
    double log_q_null_ = neg_inf;
    double log_p_inf_ = neg_inf;
    std::optional<LatticeInfo> grid_;
};

struct BuildOptions {
    // Keep P-atoms with zero Q-mass as a t = +inf sentinel instead of rejecting.
    bool allow_infinite = false;
    double merge_tol = 1e-10;
};

LlrSpectrum build_spectrum(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           const BuildOptions& opt = {});
LlrSpectrum build_spectrum(const JointMeasure& p, const JointMeasure& q,
                           const BuildOptions& opt = {});
// Conditional form: q(a, b) = r(b).
LlrSpectrum build_spectrum(const JointMeasure& p, const DiscreteMeasure& r,
                           const BuildOptions& opt = {});
// Raw (t, p) atoms, merged and sorted.
LlrSpectrum spectrum_from_atoms(std::vector<double> t, std::vector<double> p, double q_null = 0.0,
                                const BuildOptions& opt = {});

struct ConvolveOptions {
    double merge_tol = 1e-10;
    std::size_t point_cap = 2'000'000;
    // Multinomial type enumeration is used while the type count stays below this.
    double type_cap = 4e6;
    // Pairwise products per convolution step on the non-lattice path.
    double pair_cap = 6e7;
    bool parallel = true;
};

LlrSpectrum convolve_iid(const LlrSpectrum& s, int n, const ConvolveOptions& opt = {});
LlrSpectrum convolve(const LlrSpectrum& a, const LlrSpectrum& b, const ConvolveOptions& opt = {});

LatticeInfo lattice_span(const LlrSpectrum& s, double tol = -1.0);

struct LogMass {
    double log_p = neg_inf;
    double log_q = neg_inf;
    double p() const { return std::exp(log_p); }
    double q() const { return std::exp(log_q); }
};

// Sums over {t >= m} / {t > m} / {t <= m} / {t < m}. The t <= m side
// includes the Q-mass off supp(P) (t = -inf); the t >= m side includes the
// sentinel P-mass (t = +inf).
LogMass tail_geq(const LlrSpectrum& s, double m);
LogMass tail_gt(const LlrSpectrum& s, double m);
LogMass cdf_leq(const LlrSpectrum& s, double m);
LogMass cdf_lt(const LlrSpectrum& s, double m);

// Measure the generating function averages over.
enum class Under { p, q, mu };

struct CgfDerivs {
    double tau = 0, d1 = 0, d2 = 0, d3 = 0;
};

// tau(s) = log sum_i w_i e^{s x_i} with x = sign * t and w the P-, Q- or
// P^2/Q-masses of the points.
class CgfView {
public:
    explicit CgfView(const LlrSpectrum& s, Under under = Under::p, double sign = 1.0);

    double tau(double s) const;
    CgfDerivs derivs(double s) const;
    // Inverse of tau'. R must lie strictly between the extreme support points.
    double eta(double R) const;
    double slope_min() const { return xmin_; }
    double slope_max() const { return xmax_; }
    std::size_t size() const { return x_.size(); }

private:
    std::vector<double> x_;
    std::vector<double> logw_;
    double xmin_ = 0, xmax_ = 0;
};

void write_spectrum_csv(std::ostream& os, const LlrSpectrum& s);

}  // namespace flb
