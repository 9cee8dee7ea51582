#include "flb/kernels.hpp"

#include <cmath>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flb::kernels {

std::vector<long double> grid_convolve_serial(const std::vector<long double>& a,
                                              const std::vector<long double>& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t na = a.size(), nb = b.size();
    std::vector<long double> c(na + nb - 1, 0.0L);
    for (std::size_t k = 0; k < c.size(); ++k) {
        std::size_t lo = k >= nb - 1 ? k - (nb - 1) : 0;
        std::size_t hi = k < na - 1 ? k : na - 1;
        long double s = 0.0L;
        for (std::size_t i = lo; i <= hi; ++i) s += a[i] * b[k - i];
        c[k] = s;
    }
    return c;
}

std::vector<long double> grid_convolve_omp(const std::vector<long double>& a,
                                           const std::vector<long double>& b) {
    if (a.empty() || b.empty()) return {};
    const std::ptrdiff_t na = a.size(), nb = b.size();
    const std::ptrdiff_t nc = na + nb - 1;
    std::vector<long double> c(nc, 0.0L);
    // each output is an independent dot product, so summation order matches the serial kernel
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t k = 0; k < nc; ++k) {
        std::ptrdiff_t lo = k >= nb - 1 ? k - (nb - 1) : 0;
        std::ptrdiff_t hi = k < na - 1 ? k : na - 1;
        long double s = 0.0L;
        for (std::ptrdiff_t i = lo; i <= hi; ++i) s += a[i] * b[k - i];
        c[k] = s;
    }
    return c;
}

double type_count(std::size_t atoms, int n) {
    // C(n + k - 1, k - 1)
    if (atoms == 0) return 0.0;
    double k = static_cast<double>(atoms) - 1.0;
    return std::exp(std::lgamma(n + k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k + 1.0));
}

namespace {

std::vector<double> log_factorials(int n) {
    std::vector<double> lf(n + 1);
    for (int i = 0; i <= n; ++i) lf[i] = std::lgamma(i + 1.0);
    return lf;
}

// Types whose first count is fixed at n0; appends to out.
void types_with_first(const std::vector<double>& t, const std::vector<double>& log_p, int n,
                      int n0, const std::vector<double>& lf, TypeList& out) {
    const std::size_t k = t.size();
    double t0 = n0 * t[0];
    double l0 = lf[n] - lf[n0] + (n0 ? n0 * log_p[0] : 0.0);
    if (k == 1) {
        if (n0 == n) {
            out.t.push_back(t0);
            out.log_p.push_back(l0);
        }
        return;
    }
    std::function<void(std::size_t, int, double, double)> rec = [&](std::size_t j, int left,
                                                                    double tt, double ll) {
        if (j + 1 == k) {
            out.t.push_back(tt + left * t[j]);
            out.log_p.push_back(ll - lf[left] + (left ? left * log_p[j] : 0.0));
            return;
        }
        for (int c = 0; c <= left; ++c)
            rec(j + 1, left - c, tt + c * t[j], ll - lf[c] + (c ? c * log_p[j] : 0.0));
    };
    rec(1, n - n0, t0, l0);
}

}  // namespace

TypeList enumerate_types_serial(const std::vector<double>& t, const std::vector<double>& log_p,
                                int n) {
    auto lf = log_factorials(n);
    TypeList out;
    for (int n0 = 0; n0 <= n; ++n0) types_with_first(t, log_p, n, n0, lf, out);
    return out;
}

TypeList enumerate_types_omp(const std::vector<double>& t, const std::vector<double>& log_p,
                             int n) {
    auto lf = log_factorials(n);
    std::vector<TypeList> parts(n + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int n0 = 0; n0 <= n; ++n0) types_with_first(t, log_p, n, n0, lf, parts[n0]);
    TypeList out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.t.size();
    out.t.reserve(total);
    out.log_p.reserve(total);
    for (auto& p : parts) {
        out.t.insert(out.t.end(), p.t.begin(), p.t.end());
        out.log_p.insert(out.log_p.end(), p.log_p.begin(), p.log_p.end());
    }
    return out;
}

TypeList pair_sums_serial(const std::vector<double>& ta, const std::vector<double>& la,
                          const std::vector<double>& tb, const std::vector<double>& lb) {
    TypeList out;
    out.t.resize(ta.size() * tb.size());
    out.log_p.resize(out.t.size());
    for (std::size_t i = 0; i < ta.size(); ++i)
        for (std::size_t j = 0; j < tb.size(); ++j) {
            out.t[i * tb.size() + j] = ta[i] + tb[j];
            out.log_p[i * tb.size() + j] = la[i] + lb[j];
        }
    return out;
}

TypeList pair_sums_omp(const std::vector<double>& ta, const std::vector<double>& la,
                       const std::vector<double>& tb, const std::vector<double>& lb) {
    TypeList out;
    const std::ptrdiff_t na = ta.size();
    const std::size_t nb = tb.size();
    out.t.resize(na * nb);
    out.log_p.resize(out.t.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            out.t[i * nb + j] = ta[i] + tb[j];
            out.log_p[i * nb + j] = la[i] + lb[j];
        }
    return out;
}

}  // namespace flb::kernels
