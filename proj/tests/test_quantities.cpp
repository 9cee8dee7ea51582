#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "flb/quantities.hpp"

using namespace flb;

namespace {

std::vector<double> random_simplex(std::mt19937_64& g, std::size_t k) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(k);
    double s = 0;
    for (auto& x : w) s += x = u(g);
    for (auto& x : w) x /= s;
    return w;
}

std::vector<std::string> labels(std::size_t k) {
    std::vector<std::string> l;
    for (std::size_t i = 0; i < k; ++i) l.push_back(std::to_string(i));
    return l;
}

// Plain two-pass moments of log(P/Q) under P.
DivergenceStats direct_stats(const std::vector<double>& p, const std::vector<double>& q) {
    long double m1 = 0, m2 = 0, m3 = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) m1 += p[i] * std::log(p[i] / q[i]);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) {
            long double d = std::log(p[i] / q[i]) - m1;
            m2 += p[i] * d * d;
            m3 += p[i] * d * d * d;
        }
    DivergenceStats s;
    s.D = static_cast<double>(m1);
    s.V = static_cast<double>(m2);
    s.kappa = m2 > 0 ? static_cast<double>(-m3 / std::pow(m2, 1.5L)) : 0.0;
    return s;
}

}  // namespace

TEST_CASE("gauss_cdf against erfc") {
    for (double x = -37.0; x <= 8.0; x += 0.0137) {
        double ref = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(std::abs(gauss_cdf(x) - ref) <= 1e-14 * std::max(ref, 1e-300) + 1e-300);
    }
    CHECK(gauss_cdf(0.0) == 0.5);
    CHECK(gauss_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
}

TEST_CASE("gauss_inv round trip") {
    CHECK(gauss_inv(0.5) == 0.0);
    CHECK(std::abs(gauss_cdf(gauss_inv(1e-3)) - 1e-3) <= 1e-12 * 1e-3);
    for (double le = -9.0; le < 0.0; le += 0.05) {
        double e = std::pow(10.0, le);
        CHECK(std::abs(gauss_cdf(gauss_inv(e)) - e) <= 1e-12 * e);
        double f = 1.0 - e;
        CHECK(std::abs(gauss_cdf(gauss_inv(f)) - f) <= 1e-12);
    }
    CHECK_THROWS_AS(gauss_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(gauss_inv(1.0), std::domain_error);
}

TEST_CASE("divergence stats of random pairs") {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 2 + trial % 5;
        auto p = random_simplex(g, k), q = random_simplex(g, k);
        DiscreteMeasure P(labels(k), p, MeasureKind::probability), Q(labels(k), q, MeasureKind::probability);
        auto st = divergence_stats(P, Q);
        auto ref = direct_stats(p, q);
        CHECK(st.D > 0.0);
        CHECK(st.V >= 0.0);
        CHECK(st.span >= 0.0);
        CHECK(st.D == doctest::Approx(ref.D).epsilon(1e-11));
        CHECK(st.V == doctest::Approx(ref.V).epsilon(1e-10));
        CHECK(st.kappa == doctest::Approx(ref.kappa).epsilon(1e-8));
        CHECK(std::abs(divergence_stats(P, P).D) <= 1e-15);

        // scaling Q shifts the log-ratio by a constant
        std::vector<double> q3 = q;
        for (auto& x : q3) x *= 3.0;
        auto sc = divergence_stats(P, DiscreteMeasure(labels(k), q3, MeasureKind::generic));
        CHECK(sc.kappa == doctest::Approx(st.kappa).epsilon(1e-9));
        CHECK(sc.V == doctest::Approx(st.V).epsilon(1e-9));
        CHECK(sc.D == doctest::Approx(st.D - std::log(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate variance") {
    DiscreteMeasure P({"0", "1"}, {0.5, 0.5}, MeasureKind::probability);
    auto st = divergence_stats(P, counting_measure({"0", "1"}));
    CHECK(st.V == 0.0);
    CHECK(st.kappa == 0.0);
    CHECK_THROWS_AS(f_constant(1, st, 0.1), std::domain_error);
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
    CHECK(binary_entropy(0.11) == doctest::Approx(-0.11 * std::log(0.11) - 0.89 * std::log(0.89)));
    double l = std::log(0.89 / 0.11);
    CHECK(binary_varentropy(0.11) == doctest::Approx(0.11 * 0.89 * l * l));
}

TEST_CASE("v_of") {
    CHECK(v_of(0.0) == 0.0);
    CHECK(v_of(0.0, 2.5) == doctest::Approx(-std::log(2.5)));
    CHECK(std::abs(v_of(1e-6) - v_of(0.0)) <= 1e-6);
    CHECK(std::abs(v_of(1e-6, 3.0) - v_of(0.0, 3.0)) <= 1e-5);
    for (double d : {0.3, 1.7}) {
        CHECK(v_of(d, 1.0) == v_of(d));
        CHECK(v_of(d) == doctest::Approx(std::log(d / (1.0 - std::exp(-d)))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(v_of(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(v_of(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("F constants are continuous in eps") {
    DiscreteMeasure P({"0", "1"}, {0.89, 0.11}, MeasureKind::probability);
    DiscreteMeasure Q({"0", "1"}, {0.8, 0.2}, MeasureKind::probability);
    auto st = divergence_stats(P, Q);
    for (auto form : {FForm::derived, FForm::literal})
        for (int i = 1; i <= 5; ++i)
            for (double e = 0.5 - 5e-6; e < 0.5 + 5e-6; e += 1e-7) {
                double a = f_constant(i, st, e, form), b = f_constant(i, st, e + 1e-7, form);
                CHECK(std::isfinite(a));
                CHECK(std::abs(a - b) <= 1e-6);
            }
    for (int i = 1; i <= 3; ++i) CHECK(f_constant(i, st, 0.1, FForm::derived) == f_constant(i, st, 0.1, FForm::literal));
    CHECK_THROWS_AS(f_constant(6, st, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(f_constant(1, st, 1.0), std::domain_error);
}

TEST_CASE("conditional entropies order") {
    std::mt19937_64 g(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t a = 2 + trial % 3, b = 2 + trial % 4;
        auto w = random_simplex(g, a * b);
        JointMeasure j(labels(a), labels(b), w, MeasureKind::probability);
        auto r = marginal(j, Axis::cols);
        auto h = cond_entropies(j, r);
        CHECK(h.H_2 >= h.H_min - 1e-12);
        CHECK(h.H >= h.H_2 - 1e-12);
        CHECK(h.H <= std::log(static_cast<double>(a)) + 1e-12);
        auto st = divergence_stats(j, r);
        CHECK(-st.D == doctest::Approx(h.H).epsilon(1e-12));
    }
}
