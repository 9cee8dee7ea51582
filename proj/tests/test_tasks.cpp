#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flb/bounds.hpp"
#include "flb/tasks.hpp"

using namespace flb;

namespace {

// X - Y - Z with P_X(0) = px0, Y = X + BSC(a), Z = Y + BSC(b).
TripleMeasure markov_triple(double px0, double a, double b) {
    TripleMeasure t;
    t.x = t.y = t.z = {"0", "1"};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                t.w.push_back((x == 0 ? px0 : 1 - px0) * (x == y ? 1 - a : a) * (y == z ? 1 - b : b));
    return t;
}

double cond_h(const JointMeasure& j) { return cond_entropies(j, marginal(j, Axis::cols)).H; }

}  // namespace

TEST_CASE("BSC as an additive channel") {
    auto ch = bsc_channel(0.1);
    CHECK(ch.order() == 2);
    CHECK(ch.prime_power_order());
    auto k = ch.kernel();
    CHECK(k.at(0, 1) == doctest::Approx(0.1));
    CHECK(k.at(1, 1) == doctest::Approx(0.9));
    auto e = expand_channel(ch, 1e-3);
    CHECK(e.lower.a1 == doctest::Approx(std::log(2.0) - binary_entropy(0.1)).epsilon(1e-13));
    CHECK(e.upper.a1 == e.lower.a1);
    CHECK(e.lower.a3 == 0.0);
    CHECK(e.upper.a3 == 0.5);
}

TEST_CASE("mixed-radix groups") {
    std::vector<std::string> rows;
    std::vector<double> w;
    for (int i = 0; i < 6; ++i) {
        rows.push_back(std::to_string(i));
        w.push_back(i == 0 ? 0.5 : 0.1);
    }
    ConditionalAdditiveChannel ch({2, 3}, JointMeasure(rows, {"-"}, w, MeasureKind::probability));
    CHECK_FALSE(ch.prime_power_order());
    // (1,2) - (1,1) = (0,1) -> index 1; (0,0) - (1,1) = (1,2) -> index 5
    CHECK(ch.subtract(5, 4) == 1);
    CHECK(ch.subtract(0, 4) == 5);
    auto k = ch.kernel();
    for (std::size_t i = 0; i < 6; ++i) {
        double s = 0;
        for (std::size_t o = 0; o < 6; ++o) s += k.at(i, o);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(k.at(i, i) == 0.5);
    }
    CHECK(ConditionalAdditiveChannel({4}, JointMeasure({"0", "1", "2", "3"}, {"-"}, {0.7, 0.1, 0.1, 0.1},
                                                       MeasureKind::probability))
              .prime_power_order());
    CHECK_THROWS_AS(ConditionalAdditiveChannel({2, 2}, JointMeasure(rows, {"-"}, w, MeasureKind::probability)),
                    std::invalid_argument);
}

TEST_CASE("channel spectrum carries unit mass") {
    for (double p : {0.01, 0.11, 0.3}) {
        auto s = channel_spectrum(bsc_channel(p), 200);
        CHECK(s.p_total() == doctest::Approx(1.0).epsilon(1e-12));
    }
    JointMeasure b({"0", "1", "2"}, {"u", "v"}, {0.3, 0.2, 0.1, 0.1, 0.2, 0.1}, MeasureKind::probability);
    auto ch = additive_channel(3, b);
    CHECK(channel_spectrum(ch, 25).p_total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ch.output_labels().size() == 6);
    CHECK(channel_degenerate(additive_channel(
        3, JointMeasure({"0", "1", "2"}, {"-"}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, MeasureKind::probability))));
}

TEST_CASE("degraded witness reproduces the eavesdropper channel") {
    for (auto [py, pz] : {std::pair{0.1, 0.2}, std::pair{0.05, 0.45}, std::pair{0.2, 0.2}}) {
        auto k = chain(bsc_channel(py).kernel(), degraded_witness_bsc(py, pz));
        auto kz = bsc_channel(pz).kernel();
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t o = 0; o < 2; ++o) CHECK(std::abs(k.at(i, o) - kz.at(i, o)) <= 1e-15);
    }
    CHECK_THROWS_AS(degraded_witness_bsc(0.2, 0.1), std::invalid_argument);
    // a witness that does not match is rejected
    CHECK_THROWS_AS(WiretapPair(bsc_channel(0.1), bsc_channel(0.2), degraded_witness_bsc(0.1, 0.3)),
                    std::invalid_argument);
}

TEST_CASE("wiretap expansions match at first order") {
    for (auto [py, pz] : {std::pair{0.1, 0.2}, std::pair{0.01, 0.11}, std::pair{0.2, 0.4}}) {
        auto e = expand_wiretap(bsc_wiretap(py, pz), 1e-3, 1e-3);
        CHECK(e.lower.a1 == e.upper.a1);
        CHECK(e.lower.a1 == doctest::Approx(binary_entropy(pz) - binary_entropy(py)).epsilon(1e-12));
        auto t = wiretap_bsc_expansions(py, pz, 1e-3, 1e-3);
        CHECK(t.lower.a1 == t.upper.a1);
        CHECK(t.lower.a1 == doctest::Approx(e.lower.a1).epsilon(1e-12));
        CHECK(t.upper.a2 == doctest::Approx(e.upper.a2).epsilon(1e-9));
        CHECK(t.upper.a4 == doctest::Approx(e.upper.a4).epsilon(1e-9));
        CHECK(e.lower.at(1e5) <= e.upper.at(1e5));
    }
    // Z_6 is not a prime power
    std::vector<std::string> rows;
    for (int i = 0; i < 6; ++i) rows.push_back(std::to_string(i));
    std::vector<double> w = {0.5, 0.1, 0.1, 0.1, 0.1, 0.1};
    auto c6 = additive_channel(6, JointMeasure(rows, {"-"}, w, MeasureKind::probability));
    CHECK_THROWS_AS(expand_wiretap(WiretapPair(c6, c6), 0.01, 0.01), std::invalid_argument);
}

TEST_CASE("BSC wiretap tables") {
    auto t = wiretap_bsc_tables(0.1, 0.2);
    CHECK(t.p1.mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.p2.mass() == doctest::Approx(1.0).epsilon(1e-14));
    auto v = wiretap_bsc_tables(0.1, 0.2, TableForm::verbatim);
    CHECK(v.p2.kind() == MeasureKind::generic);
}

TEST_CASE("BPSK quadrature") {
    QuadratureReport rep;
    auto s1 = bpsk_stats(1.0, 0, &rep);
    CHECK(rep.achieved_rel <= 1e-12);
    auto twice = bpsk_stats(1.0, 2 * rep.panels);
    CHECK(std::abs(twice.D / s1.D - 1.0) <= 1e-8);
    CHECK(std::abs(twice.V / s1.V - 1.0) <= 1e-8);
    auto s4 = bpsk_stats(4.0), s16 = bpsk_stats(16.0);
    CHECK(s1.D > s4.D);
    CHECK(s4.D > s16.D);
    CHECK(s1.D < std::log(2.0));
    // very noisy: almost no information
    CHECK(bpsk_stats(1e4).D < 1e-3);

    BpskPair pair(1.0, 4.0);
    auto e = bpsk_expansions(pair, 1e-3, 1e-3);
    CHECK(e.lower.a1 == e.upper.a1);
    CHECK(e.lower.a1 == doctest::Approx(s1.D - s4.D).epsilon(1e-12));
    CHECK_THROWS_AS(BpskPair(4.0, 1.0), std::invalid_argument);
}

TEST_CASE("correlated sources") {
    auto t = markov_triple(0.3, 0.1, 0.15);
    CHECK(t.markov_gap() <= 1e-15);
    auto e = correlated_rv_expansions(t, 1e-3, 1e-3);
    double want = cond_h(t.xz()) - cond_h(t.xy());
    CHECK(e.upper.a1 == doctest::Approx(want).epsilon(1e-12));
    CHECK(e.lower.a1 == e.upper.a1);

    // X independent of (Y, Z)
    TripleMeasure p;
    p.x = {"0", "1"};
    p.y = {"0", "1"};
    p.z = {"0", "1"};
    const double px[2] = {0.3, 0.7}, pyz[4] = {0.4, 0.1, 0.2, 0.3};
    for (int x = 0; x < 2; ++x)
        for (int yz = 0; yz < 4; ++yz) p.w.push_back(px[x] * pyz[yz]);
    CHECK(p.markov_gap() <= 1e-15);
    auto dxy = divergence_stats(p.xy(), marginal(p.xy(), Axis::cols)).D;
    auto dxz = divergence_stats(p.xz(), marginal(p.xz(), Axis::cols)).D;
    CHECK(std::abs(dxy - dxz) <= 1e-15);
    // the reference measure equals P, so the upper expansion has V = 0
    CHECK_THROWS_AS(correlated_rv_expansions(p, 1e-3, 1e-3), std::domain_error);

    // Z depends on X directly
    TripleMeasure bad = t;
    bad.w[1] += 0.05;
    bad.w[0] -= 0.05;
    bad.w[6] += 0.05;
    bad.w[7] -= 0.05;
    CHECK(bad.markov_gap() > 1e-3);
    CHECK_THROWS_AS(correlated_rv_expansions(bad, 1e-3, 1e-3), std::invalid_argument);
}
