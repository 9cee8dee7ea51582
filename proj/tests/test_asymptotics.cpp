#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flb/asymptotics.hpp"
#include "flb/oracle.hpp"

using namespace flb;

namespace {

DiscreteMeasure bin(double p1) { return DiscreteMeasure({"0", "1"}, {1 - p1, p1}, MeasureKind::probability); }

JointMeasure bsc_leakage(double q) {
    return JointMeasure({"0", "1"}, {"0", "1"}, {0.5 * (1 - q), 0.5 * q, 0.5 * q, 0.5 * (1 - q)},
                        MeasureKind::probability);
}

}  // namespace

TEST_CASE("expansion arithmetic") {
    Expansion e{2.0, -3.0, 0.5, 1.25, Direction::upper};
    CHECK(e.at(100.0) == doctest::Approx(200.0 - 30.0 + 0.5 * std::log(100.0) + 1.25));
    CHECK(e.second_order(100.0) == doctest::Approx(170.0));
    CHECK(std::string(to_string(Direction::lower)) == "lower");
}

TEST_CASE("Edgeworth correction") {
    CHECK(edgeworth_cdf(100, 0.0, 0.0) == 0.5);
    CHECK(edgeworth_cdf(1e6, 1.0, 0.7) == doctest::Approx(gauss_cdf(1.0)).epsilon(1e-3));
    // x = +-1 is where the correction vanishes
    CHECK(edgeworth_cdf(50, 1.0, 2.0) == doctest::Approx(gauss_cdf(1.0)).epsilon(1e-15));
    double n = 400, x = 0.0, k = 0.9;
    CHECK(edgeworth_cdf(n, x, k) == doctest::Approx(0.5 + gauss_pdf(0.0) * k / (6 * 20.0)).epsilon(1e-14));
}

TEST_CASE("secure randomness expansions share the first two orders") {
    for (double q : {0.05, 0.11, 0.3})
        for (double eps : {1e-3, 0.1, 0.5}) {
            auto e = expand_srng(bsc_leakage(q), eps);
            CHECK(e.gs1.a1 == e.gs2.a1);
            CHECK(e.gs1.a1 == e.gs3.a1);
            CHECK(e.gs1.a2 == e.gs2.a2);
            CHECK(e.gs1.a2 == e.gs3.a2);
            CHECK(e.gs1.a1 == doctest::Approx(binary_entropy(q)).epsilon(1e-13));
            CHECK(e.gs1.a3 == 0.0);
            CHECK(e.gs2.a3 == -1.0);
            CHECK(e.gs3.a3 == -0.5);
            CHECK(e.gs3.direction == Direction::lower);
            if (eps == 0.5) CHECK(e.gs1.a2 == 0.0);
            else CHECK(e.gs1.a2 == doctest::Approx(std::sqrt(binary_varentropy(q)) * gauss_inv(eps)).epsilon(1e-12));
        }
}

TEST_CASE("hypothesis testing expansions") {
    for (auto form : {FForm::derived, FForm::literal}) {
        auto e = expand_ht(bin(0.11), bin(0.2), 0.1, form);
        CHECK(e.dh.a1 == e.ddt.a1);
        CHECK(e.dh.a2 == e.ddt.a2);
        CHECK(e.dh.a3 == 0.5);
        CHECK(e.ddt.a3 == 0.0);
        for (double n : {10.0, 1e3, 1e6})
            CHECK(e.dh.at(n) - e.ddt.at(n) == doctest::Approx(0.5 * std::log(n) + e.dh.a4 - e.ddt.a4).epsilon(1e-12));
    }
    CHECK(expand_ht(bin(0.11), bin(0.2), 0.5).dh.a2 == 0.0);
    CHECK_THROWS_AS(expand_ht(bin(0.5), DiscreteMeasure({"0", "1"}, {0.5, 0.5}, MeasureKind::probability), 0.1),
                    std::domain_error);
}

TEST_CASE("source coding expansions") {
    auto e = expand_source(DiscreteMeasure({"a", "b", "c"}, {0.6, 0.3, 0.1}, MeasureKind::probability), 1e-2);
    double h = -(0.6 * std::log(0.6) + 0.3 * std::log(0.3) + 0.1 * std::log(0.1));
    CHECK(e.a1 == doctest::Approx(h).epsilon(1e-13));
    CHECK(e.a2 > 0.0);  // rate grows for small eps

    // X = Y: nothing left to code, V = 0 is degenerate
    JointMeasure perfect({"0", "1"}, {"0", "1"}, {0.4, 0, 0, 0.6}, MeasureKind::probability);
    CHECK_THROWS(expand_source_side(perfect, 0.1));

    JointMeasure noisy({"0", "1"}, {"0", "1"}, {0.4, 0.1, 0.05, 0.45}, MeasureKind::probability);
    auto s = expand_source_side(noisy, 0.05);
    auto ce = cond_entropies(noisy, marginal(noisy, Axis::cols));
    CHECK(s.lower.a1 == doctest::Approx(ce.H).epsilon(1e-13));
    CHECK(s.upper.a1 == s.lower.a1);
    CHECK(s.lower.direction == Direction::lower);
    CHECK(s.upper.direction == Direction::upper);
}

TEST_CASE("shifted tail reduces to Bahadur-Rao without local shifts") {
    for (auto under : {Under::p, Under::q}) {
        auto s = build_spectrum(bin(0.11), counting_measure({"0", "1"}));
        CgfView c(s, under, 1.0);
        auto lat = lattice_span(s);
        double s0 = 0.7, R = c.derivs(s0).d1;
        for (double n : {100.0, 1000.0, 1e5}) {
            double br = bahadur_rao_log_tail(c, lat, R, n).log_value;
            CHECK(shifted_log_tail(c, lat, s0, 0.0, 0.0, n) == doctest::Approx(br).epsilon(1e-12));
        }
    }
}

TEST_CASE("Bahadur-Rao components add up") {
    auto s = build_spectrum(bin(0.11), bin(0.2));
    CgfView c(s);
    auto lat = lattice_span(s);
    double R = c.derivs(1.0).d1;
    auto est = bahadur_rao_log_tail(c, lat, R, 500);
    CHECK(est.log_value == doctest::Approx(est.chi0_n + est.half_log_n + est.chi1).epsilon(1e-14));
    CHECK(est.chi0_n < 0.0);
    CHECK_THROWS_AS(bahadur_rao_log_tail(c, lat, c.derivs(0.0).d1 - 0.1, 500), std::domain_error);
}

TEST_CASE("Bahadur-Rao against an exact non-lattice tail") {
    // three-point law with incommensurable log-ratios
    const double p[3] = {0.5, 0.3, 0.2}, q[3] = {0.3, 0.3, 0.4};
    double w[3];  // mirrored values: upper tails become CDFs
    for (int i = 0; i < 3; ++i) w[i] = -std::log(p[i] / q[i]);
    auto s = build_spectrum(DiscreteMeasure({"a", "b", "c"}, {p[0], p[1], p[2]}, MeasureKind::probability),
                            DiscreteMeasure({"a", "b", "c"}, {q[0], q[1], q[2]}, MeasureKind::probability));
    CgfView c(s);
    double R = c.derivs(0.5).d1;
    double prev = INFINITY;
    // the oracle window covers 12 standard deviations, enough for these n
    for (int n : {100, 400, 1600}) {
        double exact = std::log(oracle::trinomial_cdf(p, w, n, -n * R));
        double est = bahadur_rao_log_tail(c, lattice_span(s), R, n).log_value;
        double err = std::abs(exact - est);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 0.02);
}
