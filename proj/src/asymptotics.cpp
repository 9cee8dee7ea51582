#include "flb/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace flb {

const char* to_string(Direction d) {
    switch (d) {
    case Direction::upper: return "upper";
    case Direction::lower: return "lower";
    case Direction::equality: return "equality";
    }
    return "equality";
}

double Expansion::at(double n) const {
    return a1 * n + a2 * std::sqrt(n) + a3 * std::log(n) + a4;
}

double Expansion::second_order(double n) const { return a1 * n + a2 * std::sqrt(n); }

double edgeworth_cdf(double n, double x, double kappa) {
    if (n < 1) throw std::domain_error("edgeworth_cdf: n must be >= 1");
    return gauss_cdf(x) - gauss_pdf(x) * kappa * (x * x - 1.0) / (6.0 * std::sqrt(n));
}

TailEstimate bahadur_rao_log_tail(const CgfView& cgf, const LatticeInfo& lattice, double R,
                                  double n) {
    double mean = cgf.derivs(0.0).d1;
    if (!(R > mean)) throw std::domain_error("bahadur_rao_log_tail: R must exceed the mean");
    double eta = cgf.eta(R);
    auto d = cgf.derivs(eta);
    double eta_prime = 1.0 / d.d2;
    TailEstimate te;
    te.chi0_n = n * (-R * eta + d.tau);
    te.half_log_n = -0.5 * std::log(n);
    if (lattice.lattice()) {
        double ds = lattice.span;
        te.chi1 = -0.5 * std::log(2.0 * M_PI) + 0.5 * std::log(eta_prime) +
                  std::log(ds) - std::log(-std::expm1(-ds * eta));
    } else {
        te.chi1 = -0.5 * std::log(2.0 * M_PI) - std::log(eta) + 0.5 * std::log(eta_prime);
    }
    te.log_value = te.chi0_n + te.half_log_n + te.chi1;
    return te;
}

double shifted_log_tail(const CgfView& cgf, const LatticeInfo& lattice, double s0, double R1,
                       double R2, double n) {
    if (!(s0 > 0.0)) throw std::domain_error("shifted_log_tail: s0 must be positive");
    auto d = cgf.derivs(s0);
    if (!(d.d1 > cgf.slope_min() && d.d1 < cgf.slope_max()))
        throw std::domain_error("shifted_log_tail: s0 outside the slope range");
    double R = d.d1 + R1 / std::sqrt(n) + R2 / n;
    return n * (-R * s0 + d.tau) - 0.5 * std::log(2.0 * M_PI * d.d2 * n) +
           v_of(lattice.span, s0) - R1 * R1 / (2.0 * d.d2);
}

SrngExpansions expand_srng(const DivergenceStats& st, double eps) {
    if (!(st.V > 0.0)) throw std::domain_error("expand_srng: V = 0, expansion is degenerate");
    double H = -st.D;
    double a2 = std::sqrt(st.V) * gauss_inv(eps);
    SrngExpansions e;
    e.gs1 = {H, a2, 0.0, f_constant(1, st, eps), Direction::equality};
    e.gs2 = {H, a2, -1.0, f_constant(2, st, eps), Direction::equality};
    e.gs3 = {H, a2, -0.5, f_constant(3, st, eps), Direction::lower};
    return e;
}

SrngExpansions expand_srng(const JointMeasure& j, double eps) {
    return expand_srng(divergence_stats(j, marginal(j, Axis::cols)), eps);
}

HtExpansions expand_ht(const DivergenceStats& st, double eps, FForm form) {
    if (!(st.V > 0.0)) throw std::domain_error("expand_ht: V = 0, expansion is degenerate");
    double a2 = std::sqrt(st.V) * gauss_inv(eps);
    HtExpansions e;
    e.dh = {st.D, a2, 0.5, f_constant(4, st, eps, form), Direction::equality};
    e.ddt = {st.D, a2, 0.0, f_constant(5, st, eps, form), Direction::equality};
    return e;
}

HtExpansions expand_ht(const DiscreteMeasure& p, const DiscreteMeasure& q, double eps,
                       FForm form) {
    return expand_ht(divergence_stats(p, q), eps, form);
}

namespace {

Expansion negate(const Expansion& e, Direction d) { return {-e.a1, -e.a2, -e.a3, -e.a4, d}; }

}  // namespace

Expansion expand_source(const DiscreteMeasure& p_x, double eps, FForm form) {
    auto ht = expand_ht(p_x, counting_measure(p_x.labels()), eps, form);
    return negate(ht.dh, Direction::equality);
}

BoundPair expand_source_side(const JointMeasure& j_xy, double eps, FForm form) {
    auto ht = expand_ht(divergence_stats(j_xy, marginal(j_xy, Axis::cols)), eps, form);
    return {negate(ht.dh, Direction::lower), negate(ht.ddt, Direction::upper)};
}

}  // namespace flb
