#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "flb/bounds.hpp"
#include "flb/oracle.hpp"
#include "flb/quantities.hpp"

using namespace flb;

namespace {

JointMeasure bsc_leakage(double q) {
    return JointMeasure({"0", "1"}, {"0", "1"}, {0.5 * (1 - q), 0.5 * q, 0.5 * q, 0.5 * (1 - q)},
                        MeasureKind::probability);
}

LlrSpectrum leakage(double q) {
    auto j = bsc_leakage(q);
    return build_spectrum(j, marginal(j, Axis::cols));
}

// Leakage pair as a flat (P_AE, P_E) sequence model for the oracle.
oracle::Sequences leakage_sequences(double q, int n) {
    return oracle::enumerate({0.5 * (1 - q), 0.5 * q, 0.5 * q, 0.5 * (1 - q)}, {0.5, 0.5, 0.5, 0.5}, n);
}

std::vector<double> random_simplex(std::mt19937_64& g, std::size_t k) {
    std::uniform_real_distribution<double> u(0.02, 1.0);
    std::vector<double> w(k);
    double s = 0;
    for (auto& x : w) s += x = u(g);
    for (auto& x : w) x /= s;
    return w;
}

const std::vector<std::string> four = {"a", "b", "c", "d"};

}  // namespace

TEST_CASE("delta_min and H_min^eps against enumeration") {
    auto s1 = leakage(0.11);
    for (int n : {1, 3, 6}) {
        auto sn = convolve_iid(s1, n);
        auto seq = leakage_sequences(0.11, n);
        for (double m = -1.0; m < n * std::log(2.0) + 1; m += 0.173)
            CHECK(delta_min(m, sn) == doctest::Approx(oracle::delta_min(seq, m)).epsilon(1e-12));
        for (double eps : {1e-3, 0.02, 0.2})
            CHECK(hmin_smooth_eps(sn, eps) == doctest::Approx(oracle::hmin_smooth(seq, eps)).epsilon(1e-8));
    }
}

TEST_CASE("ell_min against the grid oracle") {
    auto s1 = leakage(0.11);
    for (int n : {2, 5}) {
        auto sn = convolve_iid(s1, n);
        auto seq = leakage_sequences(0.11, n);
        for (double eps : {1e-2, 0.1, 0.3}) {
            double exact = ell_min_eps(sn, eps), grid = oracle::ell_min(seq, eps);
            // the grid oracle can only under-estimate the inner minimum's optimum
            CHECK(exact >= grid - 1e-9);
            CHECK(exact - grid <= 1e-4);
        }
    }
}

TEST_CASE("ell_2 and d_dt against enumeration") {
    auto s1 = leakage(0.11);
    for (int n : {1, 4, 7}) {
        auto sn = convolve_iid(s1, n);
        auto seq = leakage_sequences(0.11, n);
        for (double eps : {1e-3, 0.05, 0.4}) CHECK(std::abs(ell_2_eps(sn, eps) - oracle::ell_2(seq, eps)) <= 1e-10);
    }
    std::mt19937_64 g(2);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_simplex(g, 3), q = random_simplex(g, 3);
        auto s1p = build_spectrum(DiscreteMeasure({"a", "b", "c"}, p, MeasureKind::probability),
                                  DiscreteMeasure({"a", "b", "c"}, q, MeasureKind::probability));
        int n = 1 + trial % 5;
        auto sn = convolve_iid(s1p, n);
        auto seq = oracle::enumerate(p, q, n);
        for (double eps : {0.01, 0.2}) CHECK(std::abs(d_dt_eps(sn, eps) - oracle::d_dt(seq, eps)) <= 1e-9);
    }
}

TEST_CASE("randomized Neyman-Pearson test") {
    std::mt19937_64 g(4);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = random_simplex(g, 4), q = random_simplex(g, 4);
        auto s1 = build_spectrum(DiscreteMeasure(four, p, MeasureKind::probability),
                                 DiscreteMeasure(four, q, MeasureKind::probability));
        int n = 1 + trial % 2;
        auto sn = convolve_iid(s1, n);
        auto seq = oracle::enumerate(p, q, n);
        for (double eps : {0.01, 0.1, 0.35, 0.8}) {
            double b = beta_eps(sn, eps);
            CHECK(std::abs(b - oracle::beta_exhaustive(seq, eps)) <= 1e-10);
            CHECK(std::abs(b - oracle::beta_dual(seq, eps)) <= 1e-10);
        }
    }
}

TEST_CASE("beta with equal hypotheses and with Q-only mass") {
    DiscreteMeasure P(four, {0.1, 0.2, 0.3, 0.4}, MeasureKind::probability);
    auto s = convolve_iid(build_spectrum(P, P), 3);
    for (double eps : {0.01, 0.3, 0.9}) CHECK(beta_eps(s, eps) == doctest::Approx(1.0 - eps).epsilon(1e-12));

    DiscreteMeasure Pz(four, {0.5, 0.5, 0.0, 0.0}, MeasureKind::probability);
    DiscreteMeasure Q(four, {0.25, 0.25, 0.25, 0.25}, MeasureKind::probability);
    auto sq = build_spectrum(Pz, Q);
    // accept only supp(P): beta = Q(supp P) (1 - eps)
    CHECK(beta_eps(sq, 0.2) == doctest::Approx(0.5 * 0.8).epsilon(1e-12));
}

TEST_CASE("beta is nonincreasing and convex in eps") {
    auto s = convolve_iid(build_spectrum(DiscreteMeasure({"0", "1"}, {0.89, 0.11}, MeasureKind::probability),
                                         DiscreteMeasure({"0", "1"}, {0.8, 0.2}, MeasureKind::probability)),
                          40);
    double prev = 2.0;
    for (double e = 0.001; e < 0.999; e += 0.0037) {
        double b0 = beta_eps(s, e), b1 = beta_eps(s, e + 0.001), b2 = beta_eps(s, e + 0.002);
        CHECK(b0 <= prev + 1e-15);
        CHECK(b0 + b2 >= 2 * b1 - 1e-13);
        prev = b0;
    }
}

TEST_CASE("D_DT never exceeds D_h") {
    std::mt19937_64 g(8);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = random_simplex(g, 4), q = random_simplex(g, 4);
        auto s1 = build_spectrum(DiscreteMeasure(four, p, MeasureKind::probability),
                                 DiscreteMeasure(four, q, MeasureKind::probability));
        auto sn = convolve_iid(s1, 1 + trial % 8);
        for (double eps : {1e-3, 0.05, 0.3}) CHECK(d_dt_eps(sn, eps) <= d_h_eps(sn, eps) + 1e-12);
    }
}

TEST_CASE("chain ell_min <= ell_2 <= H_min^eps and monotonicity in eps") {
    auto s1 = leakage(0.11);
    for (int n : {1, 10, 200}) {
        auto sn = convolve_iid(s1, n);
        double pm = -INFINITY, p2 = -INFINITY, ph = -INFINITY;
        for (double eps : {1e-6, 1e-4, 1e-2, 0.1, 0.5}) {
            double lm = ell_min_eps(sn, eps), l2 = ell_2_eps(sn, eps), h = hmin_smooth_eps(sn, eps);
            CHECK(lm <= l2 + 1e-9);
            CHECK(l2 <= h + 1e-9);
            CHECK(lm >= pm - 1e-12);
            CHECK(l2 >= p2 - 1e-12);
            CHECK(h >= ph - 1e-12);
            pm = lm, p2 = l2, ph = h;
        }
    }
}

TEST_CASE("H_min at eps -> 0 tends to the min-entropy") {
    auto j = bsc_leakage(0.11);
    auto s = build_spectrum(j, marginal(j, Axis::cols));
    double hmin = cond_entropies(j, marginal(j, Axis::cols)).H_min;
    CHECK(hmin == doctest::Approx(std::log(2.0) - std::log(2.0 * 0.89 / 2.0) - std::log(2.0)).epsilon(1e-12));
    CHECK(hmin_smooth_eps(s, 1e-12) == doctest::Approx(hmin).epsilon(1e-6));
}

TEST_CASE("spectral entropy and legacy bounds") {
    auto s1 = leakage(0.11);
    for (int n : {100, 1000}) {
        auto sn = convolve_iid(s1, n);
        for (double eps : {1e-3, 1e-2}) {
            auto w = legacy_bounds_w(s1, sn, eps);
            CHECK(w.w1_upper >= hmin_smooth_eps(sn, eps) - 1e-9);
            CHECK(w.w1_lower <= w.w1_upper);
            CHECK(w.w2_theta > 0.0);
            CHECK(w.w3_theta <= 1.0);
            CHECK(h_sp_eps(sn, eps) <= h_sp_eps(sn, 2 * eps));
        }
    }
    CHECK_THROWS_AS(legacy_bounds_w(convolve_iid(s1, 2), convolve_iid(s1, 2), 0.1), std::invalid_argument);
}

TEST_CASE("Renyi entropy at small order matches the Shannon entropy") {
    auto j = bsc_leakage(0.11);
    auto r = marginal(j, Axis::cols);
    auto h = cond_entropies(j, r);
    CHECK(renyi_cond(j, r, 1.0 + 1e-7) == doctest::Approx(h.H).epsilon(1e-6));
    CHECK(renyi_cond(j, r, 2.0) == doctest::Approx(h.H_2).epsilon(1e-12));
    CHECK_THROWS_AS(renyi_cond(j, r, 1.0), std::domain_error);
}

TEST_CASE("sacrifice bit-length ordering") {
    auto sn = convolve_iid(leakage(0.11), 1000);
    auto c = sacrifice_check(sn, 1000 * std::log(2.0), 1e-3);
    CHECK(c.holds);
    CHECK(c.s_min >= c.s_2);
    CHECK(sacrifice(1000 * std::log(2.0), 0.0) == doctest::Approx(1000 * std::log(2.0)));
}

TEST_CASE("eps outside (0,1) is rejected") {
    auto s = leakage(0.11);
    CHECK_THROWS_AS(beta_eps(s, 0.0), std::domain_error);
    CHECK_THROWS_AS(hmin_smooth_eps(s, 1.0), std::domain_error);
    CHECK_THROWS_AS(d_dt_eps(s, -0.1), std::domain_error);
}
