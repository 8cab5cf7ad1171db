#include "lpball/sampling.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace lpball;

static void BM_GammaVariate(benchmark::State& state) {
    Rng rng({1, 0});
    const double shape = state.range(0) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(rng.gamma(shape));
}
BENCHMARK(BM_GammaVariate)->Arg(25)->Arg(67)->Arg(100)->Arg(300);

static void BM_GeneralizedGaussian(benchmark::State& state) {
    Rng rng({1, 1});
    const double p = state.range(0) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(sampling::sample_generalized_gaussian(p, rng));
}
BENCHMARK(BM_GeneralizedGaussian)->Arg(10)->Arg(15)->Arg(20)->Arg(30);

static void BM_SampleVolume(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double p = state.range(1) / 10.0;
    Rng rng({1, 2});
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto _ : state) {
        sampling::sample_volume(n, p, rng, x);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleVolume)->Args({2, 10})->Args({10, 10})->Args({10, 20})->Args({64, 15});

static void BM_SampleCone(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng({1, 3});
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampling::sample_cone(n, 1.5, rng, x));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleCone)->Arg(2)->Arg(10)->Arg(64);

static void BM_SampleProjectedCone(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng({1, 4});
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto _ : state) {
        sampling::sample_projected_cone(n, 2.0, 3, rng, x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_SampleProjectedCone)->Arg(2)->Arg(10);

static void BM_RadialDensity(benchmark::State& state) {
    const auto m = sampling::BallMeasure::gamma_mixed(8, 1.5, 2.5);
    double r = 0.0;
    for (auto _ : state) {
        r += 1e-6;
        if (r > 0.99) r = 1e-6;
        benchmark::DoNotOptimize(sampling::radial_density(m, r));
    }
}
BENCHMARK(BM_RadialDensity);
