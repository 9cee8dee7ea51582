#include "flb/tasks.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace flb {

ConditionalAdditiveChannel::ConditionalAdditiveChannel(std::vector<int> radices, JointMeasure base)
    : radices_(std::move(radices)), base_(std::move(base)) {
    if (radices_.empty()) throw std::invalid_argument("channel: empty group");
    std::size_t total = 1;
    for (int r : radices_) {
        if (r < 2) throw std::invalid_argument("channel: cyclic factors need order >= 2");
        total *= r;
    }
    if (total != base_.n_rows())
        throw std::invalid_argument("channel: base joint has " + std::to_string(base_.n_rows()) +
                                    " rows, group order is " + std::to_string(total));
    if (base_.kind() != MeasureKind::probability)
        throw std::invalid_argument("channel: base joint must be a probability measure");
}

bool ConditionalAdditiveChannel::prime_power_order() const {
    std::size_t n = order();
    std::size_t p = 2;
    while (p * p <= n && n % p) ++p;
    if (n % p) p = n;
    while (n % p == 0) n /= p;
    return n == 1;
}

std::vector<std::string> ConditionalAdditiveChannel::output_labels() const {
    if (base_.n_cols() == 1) return base_.rows();
    std::vector<std::string> out;
    for (const auto& x : base_.rows())
        for (const auto& y : base_.cols()) out.push_back(pair_label(x, y));
    return out;
}

std::size_t ConditionalAdditiveChannel::subtract(std::size_t x, std::size_t xp) const {
    std::size_t out = 0, scale = 1;
    for (std::size_t k = radices_.size(); k-- > 0;) {
        std::size_t r = radices_[k];
        std::size_t a = x % r, b = xp % r;
        out += ((a + r - b) % r) * scale;
        scale *= r;
        x /= r;
        xp /= r;
    }
    return out;
}

ConditionalKernel ConditionalAdditiveChannel::kernel() const {
    std::size_t nx = order(), ny = base_.n_cols();
    std::vector<double> m(nx * nx * ny);
    for (std::size_t xp = 0; xp < nx; ++xp)
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                m[xp * nx * ny + x * ny + y] = base_.at(subtract(x, xp), y);
    return ConditionalKernel(base_.rows(), output_labels(), std::move(m));
}

ConditionalAdditiveChannel bsc_channel(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc: crossover outside [0,1]");
    return ConditionalAdditiveChannel({2}, JointMeasure({"0", "1"}, {"-"}, {1.0 - p, p},
                                                        MeasureKind::probability));
}

ConditionalAdditiveChannel additive_channel(int d, const JointMeasure& base) {
    std::vector<std::string> rows;
    for (int i = 0; i < d; ++i) rows.push_back(std::to_string(i));
    return ConditionalAdditiveChannel({d}, JointMeasure(rows, base.cols(), base.weights(), base.kind()));
}

namespace {

LlrSpectrum channel_order1(const ConditionalAdditiveChannel& ch) {
    const auto& b = ch.base();
    auto q = product(uniform_measure(b.rows()), marginal(b, Axis::cols));
    return build_spectrum(b, q);
}

void check_eps(double e, const char* who) {
    if (!(e > 0.0 && e < 1.0)) throw std::domain_error(std::string(who) + ": level outside (0,1)");
}

}  // namespace

LlrSpectrum channel_spectrum(const ConditionalAdditiveChannel& ch, int n) {
    return convolve_iid(channel_order1(ch), n);
}

bool channel_degenerate(const ConditionalAdditiveChannel& ch) { return channel_order1(ch).size() <= 1; }

BoundPair expand_channel(const ConditionalAdditiveChannel& ch, double eps) {
    auto st = divergence_stats(channel_order1(ch));
    if (!(st.V > 0.0)) throw std::domain_error("expand_channel: degenerate channel (V = 0)");
    double a2 = std::sqrt(st.V) * gauss_inv(eps);
    BoundPair out;
    out.lower = {st.D, a2, 0.0, f_constant(5, st, eps), Direction::lower};
    out.upper = {st.D, a2, 0.5, f_constant(4, st, eps), Direction::upper};
    return out;
}

WiretapPair::WiretapPair(ConditionalAdditiveChannel y, ConditionalAdditiveChannel z,
                         std::optional<ConditionalKernel> witness)
    : y_channel(std::move(y)), z_channel(std::move(z)), degraded_witness(std::move(witness)) {
    if (y_channel.radices() != z_channel.radices())
        throw std::invalid_argument("wiretap: channels must share the input group");
    if (degraded_witness) {
        const auto& w = *degraded_witness;
        if (w.inputs() != y_channel.output_labels() || w.outputs() != z_channel.output_labels())
            throw std::invalid_argument("wiretap: witness alphabets do not match the channels");
        auto composed = chain(y_channel.kernel(), w);
        auto wz = z_channel.kernel();
        for (std::size_t i = 0; i < wz.matrix().size(); ++i)
            if (std::abs(composed.matrix()[i] - wz.matrix()[i]) > 1e-10)
                throw std::invalid_argument("wiretap: witness does not reproduce W_Z");
    }
}

DegradedPair degraded_pair(const WiretapPair& wp) {
    if (!wp.degraded_witness)
        throw std::invalid_argument("degraded_pair: the pair has no degradedness witness");
    const auto& w = *wp.degraded_witness;
    auto wy = wp.y_channel.kernel();
    auto wz = wp.z_channel.kernel();
    std::size_t nx = wy.inputs().size(), ny = wy.outputs().size(), nz = wz.outputs().size();
    std::vector<double> py(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) py[y] += wy.at(x, y) / nx;
    std::vector<double> pz(nz, 0.0);
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) pz[z] += py[y] * w.at(y, z);
    std::vector<double> p(ny * nz), q(ny * nz);
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) {
            p[y * nz + z] = wy.at(0, y) * w.at(y, z);
            q[y * nz + z] = pz[z] > 0.0 ? py[y] * w.at(y, z) / pz[z] * wz.at(0, z) : 0.0;
        }
    // rounding in the Bayes step can push the total a hair off 1
    double qs = 0.0;
    for (double v : q) qs += v;
    for (double& v : q) v /= qs;
    return {JointMeasure(wy.outputs(), wz.outputs(), std::move(p), MeasureKind::probability),
            JointMeasure(wy.outputs(), wz.outputs(), std::move(q), MeasureKind::probability)};
}

BoundPair expand_wiretap(const WiretapPair& wp, double eps, double delta) {
    check_eps(eps, "expand_wiretap");
    check_eps(delta, "expand_wiretap");
    if (!wp.y_channel.prime_power_order())
        throw std::invalid_argument("expand_wiretap: the code construction needs a prime-power group order");
    auto sy = divergence_stats(channel_order1(wp.y_channel));
    auto sz = divergence_stats(channel_order1(wp.z_channel));
    const double a1 = sy.D - sz.D;
    BoundPair out;
    out.lower = {a1, std::sqrt(sy.V) * gauss_inv(eps) + std::sqrt(sz.V) * gauss_inv(delta), -0.5,
                 f_constant(5, sy, eps) + f_constant(3, sz, delta), Direction::lower};
    if (!wp.degraded_witness)
        throw std::invalid_argument("expand_wiretap: upper bound needs a degraded pair");
    check_eps(eps + delta, "expand_wiretap");
    auto dp = degraded_pair(wp);
    auto su = divergence_stats(dp.p, dp.q);
    out.upper = {a1, std::sqrt(su.V) * gauss_inv(eps + delta), 0.5,
                 f_constant(4, su, eps + delta), Direction::upper};
    return out;
}

ConditionalKernel degraded_witness_bsc(double p_y, double p_z) {
    if (!(p_y > 0.0 && p_y <= p_z && p_z < 0.5))
        throw std::invalid_argument("degraded_witness_bsc: need 0 < p_y <= p_z < 1/2");
    double c = (p_z - p_y) / (1.0 - 2.0 * p_y);
    return ConditionalKernel({"0", "1"}, {"0", "1"}, {1.0 - c, c, c, 1.0 - c});
}

WiretapPair bsc_wiretap(double p_y, double p_z) {
    return WiretapPair(bsc_channel(p_y), bsc_channel(p_z), degraded_witness_bsc(p_y, p_z));
}

BscTables wiretap_bsc_tables(double p_y, double p_z, TableForm form) {
    if (!(p_y > 0.0 && p_y <= p_z && p_z < 0.5))
        throw std::invalid_argument("wiretap_bsc_tables: need 0 < p_y <= p_z < 1/2");
    double c = (p_z - p_y) / (1.0 - 2.0 * p_y);
    std::vector<std::string> l = {"0", "1"};
    JointMeasure p1(l, l, {(1 - p_y) * (1 - c), (1 - p_y) * c, p_y * (1 - c), p_y * c},
                    MeasureKind::probability);
    if (form == TableForm::verbatim)
        return {p1, JointMeasure(l, l, {(1 - p_z) * (1 - c), p_z * c, (1 - p_z) * (1 - c), p_z * c},
                                 MeasureKind::generic)};
    return {p1, JointMeasure(l, l, {(1 - p_z) * (1 - c), p_z * c, p_z * (1 - c), (1 - p_z) * c},
                             MeasureKind::probability)};
}

BoundPair wiretap_bsc_expansions(double p_y, double p_z, double eps, double delta,
                                 TableForm form) {
    check_eps(eps, "wiretap_bsc_expansions");
    check_eps(delta, "wiretap_bsc_expansions");
    check_eps(eps + delta, "wiretap_bsc_expansions");
    auto tables = wiretap_bsc_tables(p_y, p_z, form);
    std::vector<std::string> l = {"0", "1"};
    auto bern = [&](double p) {
        return divergence_stats(DiscreteMeasure(l, {1 - p, p}, MeasureKind::probability),
                                counting_measure(l));
    };
    auto sy = bern(p_y), sz = bern(p_z);
    const double a1 = binary_entropy(p_z) - binary_entropy(p_y);
    BoundPair out;
    out.lower = {a1, std::sqrt(sy.V) * gauss_inv(eps) + std::sqrt(sz.V) * gauss_inv(delta), -0.5,
                 f_constant(5, sy, eps) + f_constant(3, sz, delta), Direction::lower};
    auto su = divergence_stats(tables.p1, tables.p2);
    out.upper = {a1, std::sqrt(su.V) * gauss_inv(eps + delta), 0.5,
                 f_constant(4, su, eps + delta), Direction::upper};
    return out;
}

BpskPair::BpskPair(double sy2, double sz2) : sigma_y2(sy2), sigma_z2(sz2) {
    if (!(sy2 > 0.0 && sz2 > sy2))
        throw std::invalid_argument("bpsk: need 0 < sigma_y2 < sigma_z2");
}

namespace {

constexpr double window = 14.0;  // standard deviations on each side

// log(phi_{1,s2}(y) / mixture(y)) = log 2 - log(1 + e^{-2y/s2})
double bpsk_llr(double y, double s2) {
    double a = -2.0 * y / s2;
    double softplus = a > 0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
    return std::log(2.0) - softplus;
}

// nodes and weights of the composite rule on [-window, window], weighted by phi
void composite_nodes(int panels, std::vector<double>& u, std::vector<double>& w) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = rule::abscissa();
    const auto& wt = rule::weights();
    u.clear();
    w.clear();
    double h = 2.0 * window / panels;
    for (int k = 0; k < panels; ++k) {
        double mid = -window + (k + 0.5) * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            for (int sgn : {-1, 1}) {
                double x = mid + sgn * 0.5 * h * ab[i];
                u.push_back(x);
                w.push_back(0.5 * h * wt[i] * gauss_pdf(x));
            }
        }
    }
}

struct Moments {
    double mean, m2, m3;
};

Moments moments(const std::vector<double>& f, const std::vector<double>& w) {
    double s = 0.0, sf = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += w[i];
        sf += w[i] * f[i];
    }
    double mean = sf / s, m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double d = f[i] - mean;
        m2 += w[i] * d * d;
        m3 += w[i] * d * d * d;
    }
    return {mean, m2 / s, m3 / s};
}

DivergenceStats to_stats(const Moments& m) {
    DivergenceStats st;
    st.D = m.mean;
    st.V = m.m2;
    st.kappa = m.m2 > 0 ? -m.m3 / std::pow(m.m2, 1.5) : 0.0;
    st.span = 0.0;
    return st;
}

DivergenceStats stats_1d(double s2, int panels) {
    std::vector<double> u, w, f;
    composite_nodes(panels, u, w);
    double s = std::sqrt(s2);
    f.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = bpsk_llr(1.0 + s * u[i], s2);
    return to_stats(moments(f, w));
}

DivergenceStats stats_2d(const BpskPair& pr, int panels) {
    std::vector<double> u, w;
    composite_nodes(panels, u, w);
    const double sy = std::sqrt(pr.sigma_y2), sd = std::sqrt(pr.sigma_z2 - pr.sigma_y2);
    const std::size_t N = u.size();
    std::vector<double> f(N * N), ww(N * N);
    for (std::size_t i = 0; i < N; ++i) {
        double y = 1.0 + sy * u[i];
        double ly = bpsk_llr(y, pr.sigma_y2);
        for (std::size_t j = 0; j < N; ++j) {
            double z = y + sd * u[j];
            f[i * N + j] = ly - bpsk_llr(z, pr.sigma_z2);
            ww[i * N + j] = w[i] * w[j];
        }
    }
    return to_stats(moments(f, ww));
}

double rel_change(const DivergenceStats& a, const DivergenceStats& b) {
    auto r = [](double x, double y) { return std::abs(x - y) / std::max(1e-300, std::abs(y)); };
    return std::max({r(a.D, b.D), r(a.V, b.V), std::abs(a.kappa - b.kappa) / std::max(1.0, std::abs(b.kappa))});
}

DivergenceStats adaptive(const std::function<DivergenceStats(int)>& eval, int start, int max_panels,
                         double tol, QuadratureReport* report, const char* who) {
    DivergenceStats prev = eval(start);
    for (int p = 2 * start; p <= max_panels; p *= 2) {
        DivergenceStats cur = eval(p);
        double ch = rel_change(prev, cur);
        if (ch <= tol) {
            if (report) *report = {p, ch};
            return cur;
        }
        prev = cur;
        if (report) *report = {p, ch};
    }
    throw std::runtime_error(std::string(who) + ": quadrature did not converge, achieved relative change " +
                             std::to_string(report ? report->achieved_rel : NAN));
}

}  // namespace

DivergenceStats bpsk_stats(double sigma2, int panels, QuadratureReport* report) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("bpsk_stats: variance must be positive");
    if (panels > 0) return stats_1d(sigma2, panels);
    QuadratureReport local;
    return adaptive([&](int p) { return stats_1d(sigma2, p); }, 8, 1 << 14, 1e-12,
                    report ? report : &local, "bpsk_stats");
}

DivergenceStats bpsk_joint_stats(const BpskPair& pair, int panels, QuadratureReport* report) {
    if (panels > 0) return stats_2d(pair, panels);
    QuadratureReport local;
    return adaptive([&](int p) { return stats_2d(pair, p); }, 4, 256, 1e-9,
                    report ? report : &local, "bpsk_joint_stats");
}

BoundPair bpsk_expansions(const BpskPair& pair, double eps, double delta) {
    check_eps(eps, "bpsk_expansions");
    check_eps(delta, "bpsk_expansions");
    check_eps(eps + delta, "bpsk_expansions");
    auto sy = bpsk_stats(pair.sigma_y2), sz = bpsk_stats(pair.sigma_z2);
    auto sj = bpsk_joint_stats(pair);
    const double a1 = sy.D - sz.D;
    BoundPair out;
    out.lower = {a1, std::sqrt(sy.V) * gauss_inv(eps) + std::sqrt(sz.V) * gauss_inv(delta), -0.5,
                 f_constant(5, sy, eps) + f_constant(3, sz, delta), Direction::lower};
    out.upper = {a1, std::sqrt(sj.V) * gauss_inv(eps + delta), 0.5, f_constant(4, sj, eps + delta),
                 Direction::upper};
    return out;
}

JointMeasure TripleMeasure::xy() const {
    std::vector<double> m(x.size() * y.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t k = 0; k < z.size(); ++k) m[i * y.size() + j] += at(i, j, k);
    return JointMeasure(x, y, std::move(m), MeasureKind::probability);
}

JointMeasure TripleMeasure::xz() const {
    std::vector<double> m(x.size() * z.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t k = 0; k < z.size(); ++k) m[i * z.size() + k] += at(i, j, k);
    return JointMeasure(x, z, std::move(m), MeasureKind::probability);
}

double TripleMeasure::markov_gap() const {
    std::vector<double> pxy(x.size() * y.size(), 0.0), pyz(y.size() * z.size(), 0.0),
        py(y.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t k = 0; k < z.size(); ++k) {
                double v = at(i, j, k);
                pxy[i * y.size() + j] += v;
                pyz[j * z.size() + k] += v;
                py[j] += v;
            }
    double gap = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t k = 0; k < z.size(); ++k) {
                double pred = py[j] > 0 ? pxy[i * y.size() + j] * pyz[j * z.size() + k] / py[j] : 0.0;
                gap = std::max(gap, std::abs(at(i, j, k) - pred));
            }
    return gap;
}

BoundPair correlated_rv_expansions(const TripleMeasure& t, double eps, double delta) {
    check_eps(eps, "correlated_rv_expansions");
    check_eps(delta, "correlated_rv_expansions");
    auto jxy = t.xy(), jxz = t.xz();
    auto sy = divergence_stats(jxy, marginal(jxy, Axis::cols));
    auto sz = divergence_stats(jxz, marginal(jxz, Axis::cols));
    const double a1 = sy.D - sz.D;
    BoundPair out;
    out.lower = {a1, std::sqrt(sy.V) * gauss_inv(eps) + std::sqrt(sz.V) * gauss_inv(delta), -0.5,
                 f_constant(5, sy, eps) + f_constant(3, sz, delta), Direction::lower};

    if (t.markov_gap() > 1e-10)
        throw std::invalid_argument("correlated_rv_expansions: X~ - Y~ - Z~ is not a Markov chain");
    check_eps(eps + delta, "correlated_rv_expansions");
    // reference Q(x,y,z) = P(y|z) P(x,z); columns with P(z) = 0 drop out
    const std::size_t nx = t.x.size(), ny = t.y.size(), nz = t.z.size();
    std::vector<double> pz(nz, 0.0), pyz(ny * nz, 0.0), pxz(nx * nz, 0.0);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                double v = t.at(i, j, k);
                pz[k] += v;
                pyz[j * nz + k] += v;
                pxz[i * nz + k] += v;
            }
    std::vector<std::string> labels;
    std::vector<double> pw, qw;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                labels.push_back(t.x[i] + "|" + t.y[j] + "|" + t.z[k]);
                pw.push_back(t.at(i, j, k));
                qw.push_back(pz[k] > 0 ? pyz[j * nz + k] / pz[k] * pxz[i * nz + k] : 0.0);
            }
    auto su = divergence_stats(DiscreteMeasure(labels, pw, MeasureKind::probability),
                               DiscreteMeasure(labels, qw, MeasureKind::generic));
    out.upper = {a1, std::sqrt(su.V) * gauss_inv(eps + delta), 0.5, f_constant(4, su, eps + delta),
                 Direction::upper};
    return out;
}

}  // namespace flb
