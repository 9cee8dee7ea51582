#include "flb/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "flb/format.hpp"
#include "flb/kernels.hpp"

namespace flb {

namespace {

// log(1 - e^x) for x <= 0
double log1mexp(double x) {
    if (x == neg_inf) return 0.0;
    if (x >= 0.0) return neg_inf;
    return x > -0.693 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double log_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double m = neg_inf;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, v[i]);
    if (m == neg_inf) return neg_inf;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

// mass of the n-fold power outside the finite part: log(tot^n - fin^n)
double power_excess(double log_fin, double log_extra, int n) {
    if (log_extra == neg_inf) return neg_inf;
    double log_tot = log_add(log_fin, log_extra);
    return n * log_tot + log1mexp(n * (log_fin - log_tot));
}

double pair_excess(double fin_a, double extra_a, double fin_b, double extra_b) {
    if (extra_a == neg_inf && extra_b == neg_inf) return neg_inf;
    double tot = log_add(fin_a, extra_a) + log_add(fin_b, extra_b);
    return log_sub(tot, fin_a + fin_b);
}

LlrSpectrum finalize_lattice(const kernels::TypeList& tl, const LatticeInfo& g, int n,
                             double log_q_null, double log_p_inf, std::size_t cap) {
    // tl.t holds integer grid indices
    std::vector<std::size_t> idx(tl.t.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return tl.t[a] < tl.t[b] || (tl.t[a] == tl.t[b] && a < b);
    });
    std::vector<double> t, lp, group;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        group.clear();
        while (j < idx.size() && tl.t[idx[j]] == tl.t[idx[i]]) group.push_back(tl.log_p[idx[j++]]);
        double l = log_sum(group, 0, group.size());
        if (l != neg_inf) {
            t.push_back(g.offset + tl.t[idx[i]] * g.span);
            lp.push_back(l);
        }
        i = j;
    }
    if (t.size() > cap)
        throw CapacityError("convolution produced " + std::to_string(t.size()) +
                            " points, above the cap; use a coarser merge_tol");
    return LlrSpectrum(std::move(t), std::move(lp), n, log_q_null, log_p_inf, g);
}

LlrSpectrum finalize_merge(const kernels::TypeList& tl, double merge_tol, int n,
                           double log_q_null, double log_p_inf, std::size_t cap) {
    std::vector<std::size_t> idx(tl.t.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return tl.t[a] < tl.t[b] || (tl.t[a] == tl.t[b] && a < b);
    });
    std::vector<double> t, lp;
    for (std::size_t i = 0; i < idx.size();) {
        double t0 = tl.t[idx[i]];
        std::size_t j = i;
        double m = neg_inf;
        while (j < idx.size() && tl.t[idx[j]] - t0 <= merge_tol) m = std::max(m, tl.log_p[idx[j++]]);
        if (m != neg_inf) {
            double w = 0.0, wt = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                double e = std::exp(tl.log_p[idx[k]] - m);
                w += e;
                wt += e * tl.t[idx[k]];
            }
            double tm = j - i == 1 ? t0 : wt / w;
            if (!t.empty() && tm <= t.back()) tm = std::nextafter(t.back(), INFINITY);
            t.push_back(tm);
            lp.push_back(m + std::log(w));
        }
        i = j;
    }
    if (t.size() > cap)
        throw CapacityError("convolution produced " + std::to_string(t.size()) +
                            " points, above the cap; use a coarser merge_tol");
    return LlrSpectrum(std::move(t), std::move(lp), n, log_q_null, log_p_inf);
}

bool same_grid(const LlrSpectrum& a, const LlrSpectrum& b) {
    if (!a.grid() || !b.grid()) return false;
    double da = a.grid()->span, db = b.grid()->span;
    return std::abs(da - db) <= 1e-12 * std::max(da, db);
}

std::vector<double> grid_index(const LlrSpectrum& s) {
    const auto& g = *s.grid();
    std::vector<double> k(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) k[i] = std::round((s.t(i) - g.offset) / g.span);
    return k;
}

LlrSpectrum convolve_grid(const LlrSpectrum& a, const LlrSpectrum& b, const ConvolveOptions& opt,
                          double log_q_null, double log_p_inf) {
    auto ka = grid_index(a), kb = grid_index(b);
    double ma = *std::max_element(a.log_ps().begin(), a.log_ps().end());
    double mb = *std::max_element(b.log_ps().begin(), b.log_ps().end());
    std::vector<long double> va(static_cast<std::size_t>(ka.back()) + 1, 0.0L);
    std::vector<long double> vb(static_cast<std::size_t>(kb.back()) + 1, 0.0L);
    for (std::size_t i = 0; i < a.size(); ++i)
        va[static_cast<std::size_t>(ka[i])] = std::exp(static_cast<long double>(a.log_p(i) - ma));
    for (std::size_t i = 0; i < b.size(); ++i)
        vb[static_cast<std::size_t>(kb[i])] = std::exp(static_cast<long double>(b.log_p(i) - mb));
    auto vc = opt.parallel ? kernels::grid_convolve_omp(va, vb)
                           : kernels::grid_convolve_serial(va, vb);
    LatticeInfo g{a.grid()->span, a.grid()->offset + b.grid()->offset};
    std::vector<double> t, lp;
    for (std::size_t k = 0; k < vc.size(); ++k) {
        if (vc[k] > 0.0L) {
            t.push_back(g.offset + static_cast<double>(k) * g.span);
            lp.push_back(static_cast<double>(std::log(vc[k])) + ma + mb);
        }
    }
    if (t.size() > opt.point_cap)
        throw CapacityError("convolution produced " + std::to_string(t.size()) +
                            " points, above the cap; use a coarser merge_tol");
    return LlrSpectrum(std::move(t), std::move(lp), a.n() + b.n(), log_q_null, log_p_inf, g);
}

}  // namespace

LlrSpectrum::LlrSpectrum(std::vector<double> t, std::vector<double> log_p, int n,
                         double log_q_null, double log_p_inf, std::optional<LatticeInfo> grid)
    : t_(std::move(t)), log_p_(std::move(log_p)), n_(n), log_q_null_(log_q_null),
      log_p_inf_(log_p_inf), grid_(grid) {
    if (t_.size() != log_p_.size()) throw std::invalid_argument("spectrum: column size mismatch");
    if (n_ < 1) throw std::invalid_argument("spectrum: n must be positive");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(log_p_[i]))
            throw std::invalid_argument("spectrum: non-finite point");
        if (i && !(t_[i] > t_[i - 1]))
            throw std::invalid_argument("spectrum: t values must be strictly increasing");
    }
    const std::size_t N = t_.size();
    pre_p_.resize(N);
    pre_q_.resize(N);
    suf_p_.resize(N);
    suf_q_.resize(N);
    double ap = neg_inf, aq = neg_inf;
    for (std::size_t i = 0; i < N; ++i) {
        ap = log_add(ap, log_p_[i]);
        aq = log_add(aq, log_q(i));
        pre_p_[i] = ap;
        pre_q_[i] = aq;
    }
    ap = aq = neg_inf;
    for (std::size_t i = N; i-- > 0;) {
        ap = log_add(ap, log_p_[i]);
        aq = log_add(aq, log_q(i));
        suf_p_[i] = ap;
        suf_q_[i] = aq;
    }
}

void LlrSpectrum::require_finite(const char* who) const {
    if (has_infinite())
        throw std::invalid_argument(std::string(who) +
                                    ": absolute-continuity violation (P-mass where Q = 0)");
}

LlrSpectrum spectrum_from_atoms(std::vector<double> t, std::vector<double> p, double q_null,
                                const BuildOptions& opt) {
    if (t.size() != p.size()) throw std::invalid_argument("spectrum: column size mismatch");
    kernels::TypeList tl;
    double p_inf = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (std::isinf(t[i]) && t[i] > 0) {
            p_inf += p[i];
            continue;
        }
        tl.t.push_back(t[i]);
        tl.log_p.push_back(std::log(p[i]));
    }
    if (p_inf > 0.0 && !opt.allow_infinite)
        throw std::invalid_argument("absolute-continuity violation: P has mass where Q = 0");
    return finalize_merge(tl, opt.merge_tol, 1, q_null > 0 ? std::log(q_null) : neg_inf,
                          p_inf > 0 ? std::log(p_inf) : neg_inf, SIZE_MAX);
}

namespace {

LlrSpectrum from_weight_pairs(const std::vector<double>& pw, const std::vector<double>& qw,
                              double extra_q_null, const BuildOptions& opt) {
    std::vector<double> t, p;
    double q_null = extra_q_null;
    for (std::size_t i = 0; i < pw.size(); ++i) {
        if (pw[i] > 0.0 && qw[i] > 0.0) {
            t.push_back(std::log(pw[i]) - std::log(qw[i]));
            p.push_back(pw[i]);
        } else if (pw[i] > 0.0) {
            t.push_back(INFINITY);
            p.push_back(pw[i]);
        } else {
            q_null += qw[i];
        }
    }
    return spectrum_from_atoms(std::move(t), std::move(p), q_null, opt);
}

void check_p_kind(MeasureKind k) {
    if (k == MeasureKind::generic)
        throw std::invalid_argument("build_spectrum: P must be a probability or subnormalized measure");
}

}  // namespace

LlrSpectrum build_spectrum(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           const BuildOptions& opt) {
    check_p_kind(p.kind());
    std::vector<double> pw, qw;
    for (const auto& a : p.atoms()) {
        pw.push_back(a.weight);
        qw.push_back(q.weight(a.label));
    }
    double extra = 0.0;
    for (const auto& a : q.atoms())
        if (!p.index_of(a.label)) extra += a.weight;
    return from_weight_pairs(pw, qw, extra, opt);
}

LlrSpectrum build_spectrum(const JointMeasure& p, const JointMeasure& q, const BuildOptions& opt) {
    return build_spectrum(flatten(p), flatten(q), opt);
}

LlrSpectrum build_spectrum(const JointMeasure& p, const DiscreteMeasure& r,
                           const BuildOptions& opt) {
    check_p_kind(p.kind());
    std::vector<double> pw, qw;
    for (std::size_t a = 0; a < p.n_rows(); ++a)
        for (std::size_t b = 0; b < p.n_cols(); ++b) {
            pw.push_back(p.at(a, b));
            qw.push_back(r.weight(p.cols()[b]));
        }
    double extra = 0.0;
    for (const auto& atom : r.atoms())
        if (std::find(p.cols().begin(), p.cols().end(), atom.label) == p.cols().end())
            extra += atom.weight * p.n_rows();
    return from_weight_pairs(pw, qw, extra, opt);
}

LatticeInfo lattice_span(const LlrSpectrum& s, double tol) {
    LatticeInfo info;
    if (s.empty()) return info;
    info.offset = s.t(0);
    if (s.size() == 1) return info;
    double range = s.t(s.size() - 1) - s.t(0);
    if (tol < 0) tol = 1e-9 * range;
    // real Euclid, bounded
    auto gcd = [&](double a, double b) -> double {
        if (a < b) std::swap(a, b);
        for (int it = 0; it < 64; ++it) {
            if (b <= tol) return a;
            double r = std::fmod(a, b);
            if (r >= b - tol) r = 0.0;
            a = b;
            b = r;
        }
        return 0.0;
    };
    double g = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        g = gcd(g, s.t(i) - s.t(0));
        if (g <= tol) return info;
    }
    // A gcd found only at the noise level would make everything commensurable.
    if (range / g > 1e6) return info;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        double d = s.t(i) - s.t(0);
        double k = std::round(d / g);
        if (std::abs(d - k * g) > 4 * tol) return info;
        num += k * d;
        den += k * k;
    }
    info.span = num / den;
    return info;
}

LlrSpectrum convolve(const LlrSpectrum& a, const LlrSpectrum& b, const ConvolveOptions& opt) {
    double q_null = pair_excess(a.log_q_total(), a.log_q_null(), b.log_q_total(), b.log_q_null());
    double p_inf = pair_excess(a.log_p_total(), a.log_p_inf(), b.log_p_total(), b.log_p_inf());
    int n = a.n() + b.n();
    if (a.empty() || b.empty()) return LlrSpectrum({}, {}, n, q_null, p_inf);
    if (same_grid(a, b)) return convolve_grid(a, b, opt, q_null, p_inf);
    if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > opt.pair_cap)
        throw CapacityError("non-lattice convolution needs " +
                            std::to_string(static_cast<double>(a.size()) * b.size()) +
                            " pairwise products, above the cap; use a coarser merge_tol");
    auto tl = opt.parallel ? kernels::pair_sums_omp(a.ts(), a.log_ps(), b.ts(), b.log_ps())
                           : kernels::pair_sums_serial(a.ts(), a.log_ps(), b.ts(), b.log_ps());
    return finalize_merge(tl, opt.merge_tol, n, q_null, p_inf, opt.point_cap);
}

LlrSpectrum convolve_iid(const LlrSpectrum& s, int n, const ConvolveOptions& opt) {
    if (s.n() != 1) throw std::invalid_argument("convolve_iid: input must be an order-1 spectrum");
    if (n < 1) throw std::invalid_argument("convolve_iid: n must be positive");
    if (n == 1) return s;
    double q_null = power_excess(s.log_q_total(), s.log_q_null(), n);
    double p_inf = power_excess(s.log_p_total(), s.log_p_inf(), n);
    if (s.empty()) return LlrSpectrum({}, {}, n, q_null, p_inf);

    LatticeInfo g = s.grid() ? *s.grid() : lattice_span(s);
    LlrSpectrum base = s;
    if (g.lattice() && !s.grid())
        base = LlrSpectrum(s.ts(), s.log_ps(), 1, s.log_q_null(), s.log_p_inf(), g);

    if (kernels::type_count(s.size(), n) <= opt.type_cap) {
        if (g.lattice()) {
            auto k = grid_index(base);
            auto tl = opt.parallel ? kernels::enumerate_types_omp(k, s.log_ps(), n)
                                   : kernels::enumerate_types_serial(k, s.log_ps(), n);
            LatticeInfo gn{g.span, n * g.offset};
            return finalize_lattice(tl, gn, n, q_null, p_inf, opt.point_cap);
        }
        auto tl = opt.parallel ? kernels::enumerate_types_omp(s.ts(), s.log_ps(), n)
                               : kernels::enumerate_types_serial(s.ts(), s.log_ps(), n);
        return finalize_merge(tl, opt.merge_tol, n, q_null, p_inf, opt.point_cap);
    }

    // binary exponentiation
    std::optional<LlrSpectrum> acc;
    LlrSpectrum sq = base;
    for (int k = n;;) {
        if (k & 1) acc = acc ? convolve(*acc, sq, opt) : sq;
        k >>= 1;
        if (!k) break;
        sq = convolve(sq, sq, opt);
    }
    return LlrSpectrum(acc->ts(), acc->log_ps(), n, q_null, p_inf, acc->grid());
}

LogMass tail_geq(const LlrSpectrum& s, double m) {
    auto it = std::lower_bound(s.ts().begin(), s.ts().end(), m);
    std::size_t i = it - s.ts().begin();
    return {log_add(s.log_p_from(i), s.log_p_inf()), s.log_q_from(i)};
}

LogMass tail_gt(const LlrSpectrum& s, double m) {
    auto it = std::upper_bound(s.ts().begin(), s.ts().end(), m);
    std::size_t i = it - s.ts().begin();
    return {log_add(s.log_p_from(i), s.log_p_inf()), s.log_q_from(i)};
}

LogMass cdf_leq(const LlrSpectrum& s, double m) {
    auto it = std::upper_bound(s.ts().begin(), s.ts().end(), m);
    std::size_t i = it - s.ts().begin();
    if (i == 0) return {neg_inf, s.log_q_null()};
    return {s.log_p_upto(i - 1), log_add(s.log_q_upto(i - 1), s.log_q_null())};
}

LogMass cdf_lt(const LlrSpectrum& s, double m) {
    auto it = std::lower_bound(s.ts().begin(), s.ts().end(), m);
    std::size_t i = it - s.ts().begin();
    if (i == 0) return {neg_inf, s.log_q_null()};
    return {s.log_p_upto(i - 1), log_add(s.log_q_upto(i - 1), s.log_q_null())};
}

CgfView::CgfView(const LlrSpectrum& s, Under under, double sign) {
    s.require_finite("CgfView");
    if (s.empty()) throw std::invalid_argument("CgfView: empty spectrum");
    double tilt = under == Under::p ? 0.0 : (under == Under::q ? -1.0 : 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        x_.push_back(sign * s.t(i));
        logw_.push_back(s.log_p(i) + tilt * s.t(i));
    }
    xmin_ = *std::min_element(x_.begin(), x_.end());
    xmax_ = *std::max_element(x_.begin(), x_.end());
}

double CgfView::tau(double s) const {
    double m = neg_inf;
    for (std::size_t i = 0; i < x_.size(); ++i) m = std::max(m, logw_[i] + s * x_[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) acc += std::exp(logw_[i] + s * x_[i] - m);
    return m + std::log(acc);
}

CgfDerivs CgfView::derivs(double s) const {
    double m = neg_inf;
    for (std::size_t i = 0; i < x_.size(); ++i) m = std::max(m, logw_[i] + s * x_[i]);
    double w = 0.0, wx = 0.0;
    std::vector<double> e(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
        e[i] = std::exp(logw_[i] + s * x_[i] - m);
        w += e[i];
        wx += e[i] * x_[i];
    }
    double mean = wx / w;
    double c2 = 0.0, c3 = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        double d = x_[i] - mean;
        c2 += e[i] * d * d;
        c3 += e[i] * d * d * d;
    }
    return {m + std::log(w), mean, c2 / w, c3 / w};
}

double CgfView::eta(double R) const {
    if (!(R > xmin_ && R < xmax_))
        throw std::domain_error("eta: R outside the achievable slope range");
    double lo, hi;
    double d0 = derivs(0.0).d1;
    if (d0 == R) return 0.0;
    if (d0 < R) {
        lo = 0.0;
        hi = 1.0;
        while (derivs(hi).d1 < R) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) throw std::domain_error("eta: slope not reached");
        }
    } else {
        hi = 0.0;
        lo = -1.0;
        while (derivs(lo).d1 > R) {
            hi = lo;
            lo *= 2.0;
            if (lo < -1e12) throw std::domain_error("eta: slope not reached");
        }
    }
    double s = 0.5 * (lo + hi);
    const double tol = 1e-13 * (1.0 + std::abs(R));
    for (int it = 0; it < 300; ++it) {
        auto d = derivs(s);
        double f = d.d1 - R;
        if (std::abs(f) <= tol) break;
        if (f < 0) lo = s;
        else hi = s;
        double next = d.d2 > 0 ? s - f / d.d2 : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s || hi - lo <= 1e-16 * (1.0 + std::abs(s))) break;
        s = next;
    }
    return s;
}

void write_spectrum_csv(std::ostream& os, const LlrSpectrum& s) {
    auto g = s.grid() ? *s.grid() : lattice_span(s);
    os << "# n=" << s.n() << " span=" << fmt_g12(g.span)
       << " q_null_mass=" << fmt_exp_of(s.log_q_null()) << "\n";
    os << "t,p_mass,q_mass\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        os << fmt_g12(s.t(i)) << "," << fmt_exp_of(s.log_p(i)) << "," << fmt_exp_of(s.log_q(i))
           << "\n";
}

}  // namespace flb
