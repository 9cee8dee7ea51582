#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "flb/kernels.hpp"

namespace {

std::vector<long double> masses(std::size_t n, unsigned seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<long double> v(n);
    for (auto& x : v) x = u(g);
    return v;
}

void BM_grid_serial(benchmark::State& st) {
    auto a = masses(st.range(0), 1), b = masses(st.range(0), 2);
    for (auto _ : st) benchmark::DoNotOptimize(flb::kernels::grid_convolve_serial(a, b));
}

void BM_grid_omp(benchmark::State& st) {
    auto a = masses(st.range(0), 1), b = masses(st.range(0), 2);
    for (auto _ : st) benchmark::DoNotOptimize(flb::kernels::grid_convolve_omp(a, b));
}

const std::vector<double> t3 = {-0.69, 0.0, 0.51};
const std::vector<double> l3 = {std::log(0.5), std::log(0.3), std::log(0.2)};

void BM_types_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(flb::kernels::enumerate_types_serial(t3, l3, st.range(0)));
}

void BM_types_omp(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(flb::kernels::enumerate_types_omp(t3, l3, st.range(0)));
}

}  // namespace

BENCHMARK(BM_grid_serial)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_grid_omp)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_types_serial)->Arg(200)->Arg(1000)->Arg(2000);
BENCHMARK(BM_types_omp)->Arg(200)->Arg(1000)->Arg(2000);

BENCHMARK_MAIN();
