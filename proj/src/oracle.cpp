#include "flb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flb::oracle {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool same_value(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a));
}

// Distinct values of v (clustered within rounding), ascending.
std::vector<double> knots(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || !same_value(out.back(), x)) out.push_back(x);
    return out;
}

bool at_or_below(double x, double m) { return x <= m || same_value(x, m); }

// X = -t sorted ascending with prefix P and Q sums, for fast delta_min.
struct SortedX {
    std::vector<double> x;
    std::vector<long double> cp, cq;  // cp[i] = sum of the first i masses
    explicit SortedX(const Sequences& s) {
        std::vector<std::size_t> idx(s.t.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return -s.t[a] < -s.t[b]; });
        cp.push_back(0);
        cq.push_back(0);
        for (auto i : idx) {
            if (s.p[i] == 0.0) continue;  // X = +inf never enters {X <= m}
            x.push_back(-s.t[i]);
            cp.push_back(cp.back() + s.p[i]);
            cq.push_back(cq.back() + s.q[i]);
        }
    }
    double delta(double m) const {
        std::size_t k = std::upper_bound(x.begin(), x.end(), m) - x.begin();
        return static_cast<double>(cp[k] - std::exp(static_cast<long double>(-m)) * cq[k]);
    }
};

}  // namespace

Sequences enumerate(const std::vector<double>& p1, const std::vector<double>& q1, int n) {
    if (p1.size() != q1.size() || p1.empty() || n < 1) throw std::invalid_argument("oracle::enumerate");
    const std::size_t a = p1.size();
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        total *= a;
        if (total > (1u << 24)) throw std::invalid_argument("oracle::enumerate: too many sequences");
    }
    Sequences s;
    s.p.resize(total);
    s.q.resize(total);
    s.t.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double p = 1.0, q = 1.0;
        std::size_t v = idx;
        for (int i = 0; i < n; ++i) {
            p *= p1[v % a];
            q *= q1[v % a];
            v /= a;
        }
        s.p[idx] = p;
        s.q[idx] = q;
        if (p == 0.0) s.t[idx] = -inf;
        else if (q == 0.0) s.t[idx] = inf;
        else s.t[idx] = std::log(p / q);
    }
    return s;
}

double delta_min(const Sequences& s, double m) {
    long double acc = 0;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.p[i] > 0.0 && at_or_below(-s.t[i], m)) acc += s.p[i] - std::exp(-m) * s.q[i];
    return static_cast<double>(acc);
}

double hmin_smooth(const Sequences& s, double eps) {
    SortedX sx(s);
    if (sx.x.empty() || static_cast<double>(sx.cp.back()) <= eps) return inf;
    double lo = sx.x.front() - 1.0, hi = sx.x.back() + 1.0;
    while (sx.delta(hi) <= eps) hi += 2.0 * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        (sx.delta(mid) <= eps ? lo : hi) = mid;
    }
    return lo;
}

double ell_min(const Sequences& s, double eps, int grid) {
    SortedX sx(s);
    if (sx.x.empty() || static_cast<double>(sx.cp.back()) <= eps) return inf;
    std::vector<double> ms = sx.x;
    double a = sx.x.front() - 10.0, b = sx.x.back() + 10.0;
    for (int i = 0; i <= grid; ++i) ms.push_back(a + (b - a) * i / grid);
    std::vector<double> dm(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) dm[i] = sx.delta(ms[i]);
    auto g = [&](double mp) {
        double best = inf;
        for (std::size_t i = 0; i < ms.size(); ++i)
            best = std::min(best, dm[i] + 0.5 * std::exp((mp - ms[i]) / 2.0));
        return best;
    };
    double lo = a - 100.0, hi = b;
    while (g(hi) <= eps) hi += 10.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) <= eps ? lo : hi) = mid;
    }
    return lo;
}

double ell_2(const Sequences& s, double eps) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.p[i] > 0.0) xs.push_back(-s.t[i]);
    std::vector<double> th = knots(xs);
    th.insert(th.begin(), -inf);
    double best = -inf;
    for (double m : th) {
        long double pl = 0, mu = 0;
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (s.p[i] == 0.0) continue;
            if (m != -inf && at_or_below(-s.t[i], m)) pl += s.p[i];
            else mu += s.q[i] > 0.0 ? (long double)s.p[i] * s.p[i] / s.q[i] : (long double)inf;
        }
        if (pl >= eps) continue;
        if (mu == 0) return inf;
        best = std::max(best, static_cast<double>(2.0L * std::log(2.0L * (eps - pl)) - std::log(mu)));
    }
    return best;
}

double d_dt(const Sequences& s, double eps) {
    std::vector<double> ts;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.p[i] > 0.0) ts.push_back(s.t[i]);
    std::vector<double> th = knots(ts);
    th.insert(th.begin(), -inf);
    double best = -inf;
    for (double m : th) {
        long double pl = 0, qg = 0;
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            bool below = s.p[i] == 0.0 || (m != -inf && at_or_below(s.t[i], m));
            if (below) pl += s.p[i];
            else qg += s.q[i];
        }
        if (pl >= eps) continue;
        if (qg == 0) return inf;
        best = std::max(best, static_cast<double>(std::log((long double)eps - pl) - std::log(qg)));
    }
    return best;
}

double beta_dual(const Sequences& s, double eps) {
    std::vector<long double> lambdas = {0.0L};
    for (std::size_t i = 0; i < s.p.size(); ++i)
        if (s.p[i] > 0.0) lambdas.push_back((long double)s.q[i] / s.p[i]);
    long double best = 0;
    for (long double l : lambdas) {
        long double v = l * (1.0L - eps);
        for (std::size_t i = 0; i < s.p.size(); ++i) v -= std::max(0.0L, l * s.p[i] - s.q[i]);
        best = std::max(best, v);
    }
    return static_cast<double>(best);
}

double beta_exhaustive(const Sequences& s, double eps) {
    const std::size_t N = s.p.size();
    if (N > 20) throw std::invalid_argument("beta_exhaustive: too many outcomes");
    const double target = 1.0 - eps;
    double best = inf;
    for (std::size_t mask = 0; mask < (std::size_t(1) << N); ++mask) {
        double pa = 0, qa = 0;
        for (std::size_t i = 0; i < N; ++i)
            if (mask >> i & 1) {
                pa += s.p[i];
                qa += s.q[i];
            }
        if (pa >= target) {
            best = std::min(best, qa);
            continue;
        }
        for (std::size_t b = 0; b < N; ++b) {
            if ((mask >> b & 1) || s.p[b] == 0.0 || pa + s.p[b] < target) continue;
            double g = (target - pa) / s.p[b];
            best = std::min(best, qa + g * s.q[b]);
        }
    }
    return best;
}

double trinomial_cdf(const double p[3], const double v[3], int n, double x) {
    std::vector<double> lf(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
    const double lp[3] = {std::log(p[0]), std::log(p[1]), std::log(p[2])};
    const double lim = x + 1e-9 * (1.0 + std::abs(x));
    // types further than 12 standard deviations out carry less than e^-70
    auto window = [](int m, double pr) {
        double c = m * pr, r = 12.0 * std::sqrt(m * pr * (1 - pr)) + 2.0;
        return std::pair<int, int>{std::max(0, int(c - r)), std::min(m, int(c + r) + 1)};
    };
    long double acc = 0;
    auto [a0, a1] = window(n, p[0]);
    for (int a = a0; a <= a1; ++a) {
        auto [b0, b1] = window(n - a, p[1] / (p[1] + p[2]));
        for (int b = b0; b <= b1; ++b) {
            int c = n - a - b;
            if (a * v[0] + b * v[1] + c * v[2] > lim) continue;
            acc += std::exp(static_cast<long double>(lf[n] - lf[a] - lf[b] - lf[c] + a * lp[0] + b * lp[1] +
                                                     c * lp[2]));
        }
    }
    return static_cast<double>(acc);
}

double Binomial::log_mass(int k) const {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
           (n - k) * std::log1p(-p);
}

double Binomial::cdf(double x, double tol) const {
    const double lim = x + tol * (1.0 + std::abs(x));
    long double acc = 0;
    for (int k = 0; k <= n; ++k)
        if (value(k) <= lim) acc += std::exp(static_cast<long double>(log_mass(k)));
    return static_cast<double>(acc);
}

}  // namespace flb::oracle
