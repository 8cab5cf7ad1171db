#include "lpball/sections.hpp"
#include "lpball/specfun.hpp"
#include "lpball/stats.hpp"

#include <benchmark/benchmark.h>

using namespace lpball;

static void BM_Alpha(benchmark::State& state) {
    const double p = state.range(0) / 10.0;
    double l = 0.1;
    for (auto _ : state) {
        l = l > 8.0 ? 0.1 : l + 0.1;
        benchmark::DoNotOptimize(specfun::alpha(p, l));
    }
}
BENCHMARK(BM_Alpha)->Arg(7)->Arg(10)->Arg(20)->Arg(35);

static void BM_TailIntegral(benchmark::State& state) {
    double t = 0.1;
    for (auto _ : state) {
        t = t > 3.0 ? 0.1 : t + 0.05;
        benchmark::DoNotOptimize(specfun::tail_integral(t, 2.5));
    }
}
BENCHMARK(BM_TailIntegral);

static void BM_BallVolume(benchmark::State& state) {
    int n = 1;
    for (auto _ : state) {
        n = n >= 256 ? 1 : n + 1;
        benchmark::DoNotOptimize(specfun::ball_volume(n, PExponent(1.5)));
    }
}
BENCHMARK(BM_BallVolume);

static void BM_KsCriticalExact(benchmark::State& state) {
    // uncached path: the argument changes every iteration
    std::size_t n = 100;
    for (auto _ : state) {
        n = n >= 2000 ? 100 : n + 1;
        benchmark::DoNotOptimize(stats::ks_cdf_exact(n, 0.05));
    }
}
BENCHMARK(BM_KsCriticalExact);

static void BM_TiltedIntervalMass(benchmark::State& state) {
    const sections::TiltedDensity d(1.5, 1.0);
    double a = 0.05;
    for (auto _ : state) {
        a = a > 3.0 ? 0.05 : a + 0.05;
        benchmark::DoNotOptimize(d.interval_mass(a));
    }
}
BENCHMARK(BM_TiltedIntervalMass);

static void BM_SectionRatio(benchmark::State& state) {
    Rng rng({5, 0});
    const auto E = sections::Subspace::random(6, 3, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sections::section_pmoment_ratio(E, 1.5, 2000, {5, 1}));
    }
}
BENCHMARK(BM_SectionRatio);
