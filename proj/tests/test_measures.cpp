#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "flb/measures.hpp"

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

std::vector<std::string> labels(std::size_t k, const std::string& pre) {
    std::vector<std::string> l;
    for (std::size_t i = 0; i < k; ++i) l.push_back(pre + std::to_string(i));
    return l;
}

}  // namespace

TEST_CASE("counting and uniform measures") {
    auto c = counting_measure({"0", "1"});
    CHECK(c.mass() == 2.0);
    CHECK(c.kind() == MeasureKind::generic);
    CHECK(counting_measure({"a"}).mass() == 1.0);
    CHECK(counting_measure(labels(8, "x")).mass() == 8.0);
    CHECK(uniform_measure(labels(4, "x")).weight("x2") == doctest::Approx(0.25));
    CHECK_THROWS_AS(counting_measure({}), std::invalid_argument);
}

TEST_CASE("kind checks") {
    CHECK_NOTHROW(DiscreteMeasure({"0", "1"}, {0.89, 0.11}, MeasureKind::probability));
    CHECK_THROWS_AS(DiscreteMeasure({"0", "1"}, {0.5, 0.4}, MeasureKind::probability), std::invalid_argument);
    CHECK_NOTHROW(DiscreteMeasure({"0", "1"}, {0.5, 0.4}, MeasureKind::subnormalized));
    CHECK_THROWS_AS(DiscreteMeasure({"0", "1"}, {0.7, 0.4}, MeasureKind::subnormalized), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({"0", "1"}, {-0.1, 1.1}, MeasureKind::generic), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({"0", "0"}, {0.5, 0.5}, MeasureKind::probability), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({"0"}, {0.5, 0.5}, MeasureKind::generic), std::invalid_argument);
}

TEST_CASE("labels and weights") {
    DiscreteMeasure m({"a", "b", "c"}, {0.2, 0.0, 0.8}, MeasureKind::probability);
    CHECK(m.index_of("c").value() == 2);
    CHECK_FALSE(m.index_of("z").has_value());
    CHECK(m.weight("z") == 0.0);
    CHECK(m.weight("b") == 0.0);
    CHECK(m.size() == 3);  // zero atoms kept
}

TEST_CASE("kernel rows must be stochastic") {
    CHECK_THROWS_AS(ConditionalKernel({"0", "1"}, {"0", "1"}, {0.9, 0.1, 0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(ConditionalKernel({"0"}, {"0", "1"}, {1.0}), std::invalid_argument);
}

TEST_CASE("compose preserves mass and marginal recovers the input") {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t a = 2 + trial % 4, b = 2 + trial % 3;
        auto pw = random_simplex(g, a);
        DiscreteMeasure p(labels(a, "a"), pw, MeasureKind::probability);
        std::vector<double> km;
        for (std::size_t i = 0; i < a; ++i) {
            auto row = random_simplex(g, b);
            km.insert(km.end(), row.begin(), row.end());
        }
        ConditionalKernel k(labels(a, "a"), labels(b, "b"), km);
        auto j = compose(k, p);
        CHECK(std::abs(j.mass() - p.mass()) <= 1e-12);
        auto back = marginal(j, Axis::rows);
        for (std::size_t i = 0; i < a; ++i) CHECK(std::abs(back.weights()[i] - pw[i]) <= 1e-12);
        auto cols = marginal(j, Axis::cols);
        CHECK(cols.kind() == MeasureKind::probability);
        CHECK(std::abs(cols.mass() - 1.0) <= 1e-12);
    }
}

TEST_CASE("chain of two binary symmetric kernels") {
    ConditionalKernel k1({"0", "1"}, {"0", "1"}, {0.9, 0.1, 0.1, 0.9});
    ConditionalKernel k2({"0", "1"}, {"0", "1"}, {0.8, 0.2, 0.2, 0.8});
    auto k = chain(k1, k2);
    // crossover a(1-b) + b(1-a)
    CHECK(k.at(0, 1) == doctest::Approx(0.1 * 0.8 + 0.9 * 0.2).epsilon(1e-14));
    CHECK(k.at(1, 1) == doctest::Approx(0.74).epsilon(1e-14));
    ConditionalKernel bad({"x", "y"}, {"0", "1"}, {1, 0, 0, 1});
    CHECK_THROWS_AS(chain(k1, bad), std::invalid_argument);
}

TEST_CASE("product and flatten") {
    DiscreteMeasure a({"0", "1"}, {0.25, 0.75}, MeasureKind::probability);
    auto u = counting_measure({"x", "y", "z"});
    auto j = product(a, u);
    CHECK(j.n_rows() == 2);
    CHECK(j.n_cols() == 3);
    CHECK(j.at(1, 2) == 0.75);
    CHECK(j.mass() == doctest::Approx(3.0));
    auto f = flatten(j);
    CHECK(f.size() == 6);
    CHECK(f.weight(pair_label("1", "z")) == 0.75);
}
