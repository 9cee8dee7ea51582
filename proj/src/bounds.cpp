#include "flb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flb {

namespace {

constexpr double pos_inf = std::numeric_limits<double>::infinity();

void check_eps(double eps, const char* who) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error(std::string(who) + ": eps must lie in (0,1)");
}

// X = -t sorted ascending: knot j is spectrum index size-1-j.
struct XView {
    const LlrSpectrum& s;
    std::size_t N;
    explicit XView(const LlrSpectrum& sp) : s(sp), N(sp.size()) {}
    std::size_t idx(std::size_t j) const { return N - 1 - j; }
    double x(std::size_t j) const { return -s.t(idx(j)); }
    // masses of {X <= x_j}
    double log_p_le(std::size_t j) const { return s.log_p_from(idx(j)); }
    double log_q_le(std::size_t j) const { return s.log_q_from(idx(j)); }
};

}  // namespace

const char* to_string(BoundKind k) {
    switch (k) {
    case BoundKind::upper: return "upper";
    case BoundKind::lower: return "lower";
    case BoundKind::exact: return "exact";
    }
    return "exact";
}

double delta_min(double m, const LlrSpectrum& s) {
    s.require_finite("delta_min");
    if (m == -pos_inf) return 0.0;
    auto tl = tail_geq(s, -m);
    double a = tl.p();
    double b = tl.log_q == neg_inf ? 0.0 : std::exp(tl.log_q - m);
    return a - b;
}

double hmin_smooth_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "hmin_smooth_eps");
    s.require_finite("hmin_smooth_eps");
    XView v(s);
    for (std::size_t j = 0; j < v.N; ++j) {
        double P = std::exp(v.log_p_le(j));
        if (P <= eps) continue;
        // delta = P - e^{-m} Q on [x_j, x_{j+1})
        double m = v.log_q_le(j) - std::log(P - eps);
        if (j + 1 < v.N && m >= v.x(j + 1)) continue;
        return std::max(m, v.x(j));
    }
    return pos_inf;
}

double ell_min_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "ell_min_eps");
    s.require_finite("ell_min_eps");
    XView v(s);
    if (eps >= s.p_total()) return pos_inf;
    // The objective is concave in e^{-m/2} on every interval between knots,
    // so its minimum over m sits on a knot.
    double best = -pos_inf;
    for (std::size_t j = 0; j < v.N; ++j) {
        double dj = 0.0;
        if (j > 0) dj = std::exp(v.log_p_le(j - 1)) - std::exp(v.log_q_le(j - 1) - v.x(j));
        if (dj >= eps) break;
        best = std::max(best, v.x(j) + 2.0 * std::log(2.0 * (eps - dj)));
    }
    return best;
}

double ell_2_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "ell_2_eps");
    s.require_finite("ell_2_eps");
    const std::size_t N = s.size();
    if (N == 0) return pos_inf;
    // mu-mass of a point is p e^{t}; mu{X > x_j} sums t < t_idx(j)
    std::vector<double> mu_pre(N);
    double acc = neg_inf;
    for (std::size_t i = 0; i < N; ++i) {
        acc = log_add(acc, s.log_p(i) + s.t(i));
        mu_pre[i] = acc;
    }
    double best = 2.0 * std::log(2.0 * eps) - mu_pre[N - 1];
    XView v(s);
    for (std::size_t j = 0; j < N; ++j) {
        double P = std::exp(v.log_p_le(j));
        if (P >= eps) break;
        std::size_t i = v.idx(j);
        if (i == 0) return pos_inf;
        best = std::max(best, 2.0 * std::log(2.0 * (eps - P)) - mu_pre[i - 1]);
    }
    return best;
}

double log_beta_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "beta_eps");
    // Reject the smallest t first; sentinel atoms (t = +inf) are never
    // rejected and Q-only atoms are rejected for free.
    for (std::size_t i = 0; i < s.size(); ++i) {
        double P = std::exp(s.log_p_upto(i));
        if (P <= eps) continue;
        // boundary atom: keep the fraction (P - eps) / p_i
        double keep = (P - eps) / s.p_mass(i);
        keep = std::min(1.0, keep);
        return log_add(s.log_q_from(i + 1), std::log(keep) + s.log_q(i));
    }
    return neg_inf;
}

double beta_eps(const LlrSpectrum& s, double eps) { return std::exp(log_beta_eps(s, eps)); }

double d_h_eps(const LlrSpectrum& s, double eps) { return -log_beta_eps(s, eps); }

double d_dt_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "d_dt_eps");
    s.require_finite("d_dt_eps");
    const std::size_t N = s.size();
    if (N == 0) return pos_inf;
    double best = std::log(eps) - s.log_q_total();
    for (std::size_t i = 0; i < N; ++i) {
        double P = std::exp(s.log_p_upto(i));
        if (P >= eps) break;
        if (i + 1 == N) return pos_inf;
        best = std::max(best, std::log(eps - P) - s.log_q_from(i + 1));
    }
    return best;
}

double h_sp_eps(const LlrSpectrum& s, double eps) {
    check_eps(eps, "h_sp_eps");
    s.require_finite("h_sp_eps");
    XView v(s);
    for (std::size_t j = 0; j < v.N; ++j)
        if (std::exp(v.log_p_le(j)) > eps) return v.x(j);
    return pos_inf;
}

double renyi_cond(const LlrSpectrum& s, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::domain_error("renyi_cond: theta must lie in (0,1]");
    CgfView c(s, Under::p, 1.0);
    return -c.tau(theta) / theta;
}

double renyi_cond(const JointMeasure& j, const DiscreteMeasure& r, double order) {
    return renyi_cond(build_spectrum(j, r), order - 1.0);
}

LegacyBounds legacy_bounds_w(const LlrSpectrum& order1, const LlrSpectrum& spec_n, double eps,
                             const LegacySplits& splits) {
    check_eps(eps, "legacy_bounds_w");
    if (order1.n() != 1) throw std::invalid_argument("legacy_bounds_w: order1 must have n = 1");
    double eta = splits.eta < 0 ? eps / 2 : splits.eta;
    double zeta = splits.zeta < 0 ? eps / 2 : splits.zeta;
    if (!(eps - eta > 0.0)) throw std::domain_error("legacy_bounds_w: eps - eta must be positive");
    if (!(zeta > 0.0) || !(eps + zeta < 1.0))
        throw std::domain_error("legacy_bounds_w: zeta must lie in (0, 1 - eps)");
    const double n = spec_n.n();
    LegacyBounds out;
    double hsp_lo = h_sp_eps(spec_n, eps - eta);
    out.w1_lower = hsp_lo + std::log(4.0 * eta * eta) - 1.0;
    out.w1_upper = h_sp_eps(spec_n, eps + zeta) - std::log(zeta);

    CgfView c(order1, Under::p, 1.0);
    out.w2_lower = out.w3_lower = -pos_inf;
    const int K = splits.theta_points;
    const double l0 = std::log(splits.theta_min);
    for (int k = 0; k < K; ++k) {
        double th = K == 1 ? 1.0 : std::exp(l0 + (0.0 - l0) * k / (K - 1));
        double h = -n * c.tau(th) / th;
        double w2 = th * h + (1.0 - th) * hsp_lo + std::log(2.0 * eta * eta) - 1.0;
        double w3 = h + (1.0 + th) / th * std::log(2.0 * eps / 3.0) - 1.0;
        if (w2 > out.w2_lower) {
            out.w2_lower = w2;
            out.w2_theta = th;
        }
        if (w3 > out.w3_lower) {
            out.w3_lower = w3;
            out.w3_theta = th;
        }
    }
    return out;
}

double sacrifice(double log_alphabet, double ell) { return log_alphabet - ell; }

SacrificeCheck sacrifice_check(const LlrSpectrum& s, double log_alphabet, double eps) {
    SacrificeCheck c;
    c.s_min = sacrifice(log_alphabet, ell_min_eps(s, eps));
    c.s_2 = sacrifice(log_alphabet, ell_2_eps(s, eps));
    c.holds = c.s_min >= c.s_2 - 1e-9;
    return c;
}

}  // namespace flb
