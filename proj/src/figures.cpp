#include "flb/figures.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "flb/bounds.hpp"
#include "flb/format.hpp"
#include "flb/tasks.hpp"

namespace flb {

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no column " + name);
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt_g12(r[i]);
        os << '\n';
    }
}

std::vector<int> geometric_grid(double a, double b, int points) {
    if (!(a >= 1 && b >= a) || points < 1) throw std::invalid_argument("geometric_grid: bad range");
    std::vector<int> out;
    for (int k = 0; k < points; ++k) {
        double v = points == 1 ? a : a * std::pow(b / a, double(k) / (points - 1));
        int n = static_cast<int>(std::lround(v));
        if (out.empty() || n != out.back()) out.push_back(n);
    }
    return out;
}

namespace {

constexpr double leak_q = 0.11;

JointMeasure bsc_leakage(double q) {
    return JointMeasure({"0", "1"}, {"0", "1"},
                        {0.5 * (1 - q), 0.5 * q, 0.5 * q, 0.5 * (1 - q)}, MeasureKind::probability);
}

const std::vector<std::string> srng_columns = {
    "n", "eps", "log10_eps", "hmin_upper", "ell2_lower", "ellmin_lower", "w1_upper",
    "w1_lower", "w2_lower", "w3_lower", "w2_theta", "w3_theta"};

std::vector<double> srng_row(const LlrSpectrum& order1, const LlrSpectrum& sn, double eps,
                             double unit) {
    const double n = sn.n();
    auto w = legacy_bounds_w(order1, sn, eps);
    double r = 1.0 / (n * unit);
    return {n,
            eps,
            std::log10(eps),
            hmin_smooth_eps(sn, eps) * r,
            ell_2_eps(sn, eps) * r,
            ell_min_eps(sn, eps) * r,
            w.w1_upper * r,
            w.w1_lower * r,
            w.w2_lower * r,
            w.w3_lower * r,
            w.w2_theta,
            w.w3_theta};
}

}  // namespace

Table figure_srng_rate_vs_n(bool bits) {
    const double eps = 1e-3, unit = bits ? std::log(2.0) : 1.0;
    auto j = bsc_leakage(leak_q);
    auto order1 = build_spectrum(j, marginal(j, Axis::cols));
    auto grid = geometric_grid(100, 100000, 31);
    Table t{srng_columns, std::vector<std::vector<double>>(grid.size())};
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < grid.size(); ++i)
        t.rows[i] = srng_row(order1, convolve_iid(order1, grid[i]), eps, unit);
    return t;
}

Table figure_srng_rate_vs_eps(int n, bool bits) {
    const double unit = bits ? std::log(2.0) : 1.0;
    auto j = bsc_leakage(leak_q);
    auto order1 = build_spectrum(j, marginal(j, Axis::cols));
    auto sn = convolve_iid(order1, n);
    const int K = 37;  // log10 eps from -10 to -1 in steps of 0.25
    Table t{srng_columns, std::vector<std::vector<double>>(K)};
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < K; ++k) t.rows[k] = srng_row(order1, sn, std::pow(10.0, -10.0 + 0.25 * k), unit);
    return t;
}

Table figure_wiretap_bsc(bool bits) {
    const double unit = bits ? std::log(2.0) : 1.0;
    auto e = wiretap_bsc_expansions(0.1, 0.2, 1e-3, 1e-3);
    Table t{{"n", "lower", "upper", "lower_second_order", "upper_second_order"}, {}};
    for (int n : geometric_grid(100, 1000000, 41)) {
        double r = 1.0 / (n * unit);
        t.rows.push_back({double(n), e.lower.at(n) * r, e.upper.at(n) * r,
                          e.lower.second_order(n) * r, e.upper.second_order(n) * r});
    }
    return t;
}

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {"srng-rate-vs-n", "srng-rate-vs-eps-3000",
                                                   "srng-rate-vs-eps-100000", "wiretap-bsc"};
    return names;
}

Table make_figure(const std::string& name, bool bits) {
    if (name == "srng-rate-vs-n") return figure_srng_rate_vs_n(bits);
    if (name == "srng-rate-vs-eps-3000") return figure_srng_rate_vs_eps(3000, bits);
    if (name == "srng-rate-vs-eps-100000") return figure_srng_rate_vs_eps(100000, bits);
    if (name == "wiretap-bsc") return figure_wiretap_bsc(bits);
    throw std::invalid_argument("unknown figure '" + name + "'");
}

}  // namespace flb
