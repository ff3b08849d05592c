#include "qfric/decoherence.hpp"
#include "qfric/friction.hpp"
#include "qfric/gle.hpp"
#include "qfric/kernels.hpp"
#include "qfric/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace qfric;

namespace {

ModelParams params(double v, double w0, double wp, double lambda)
{
    ModelParams p = with_dimless_frequencies({}, w0, wp);
    p.v = v;
    p.lambda = lambda;
    return p;
}

void BM_AdaptiveOscillatory(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(
            integrate_adaptive([](double x) { return std::sin(50.0 * x) / (1.0 + x); }, 0.0, 1.0).value);
}
BENCHMARK(BM_AdaptiveOscillatory);

void BM_CauchyPrincipalValue(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(cauchy_pv([](double x) { return std::exp(x); }, 1.0, 0.0, 2.0).value);
}
BENCHMARK(BM_CauchyPrincipalValue);

void BM_FrictionCurve(benchmark::State& state)
{
    std::vector<double> grid;
    for (int i = 0; i <= 90; ++i)
        grid.push_back(0.01 * i);
    const ModelParams p = params(0.5, 0.01, 0.01, 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(friction_curve(p, grid));
}
BENCHMARK(BM_FrictionCurve);

void BM_BandSumInside(benchmark::State& state)
{
    const ModelParams p = params(0.5, 0.03, 0.03, 1e-4);
    for (auto _ : state)
        benchmark::DoNotOptimize(script_s2(p).value);
}
BENCHMARK(BM_BandSumInside);

void BM_BandSumOutside(benchmark::State& state)
{
    const ModelParams p = params(0.5, 0.03, 0.1, 1e-4);
    for (auto _ : state)
        benchmark::DoNotOptimize(script_s1(p).value);
}
BENCHMARK(BM_BandSumOutside);

void BM_FreeKernels(benchmark::State& state)
{
    const ModelParams p = params(0.5, 0.03, 0.03, 0.01);
    const TimeGrid grid{0.5, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(free_kernels(p, grid, default_regulator(p)));
}
BENCHMARK(BM_FreeKernels)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PlateKernels(benchmark::State& state)
{
    const ModelParams p = params(0.5, 0.03, 0.03, 0.01);
    const TimeGrid grid{0.5, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(plate_kernels(p, grid, default_regulator(p)));
}
BENCHMARK(BM_PlateKernels)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GleTrajectory(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const double dt = 0.05;
    std::vector<double> lags(n);
    for (std::size_t l = 0; l < n; ++l)
        lags[l] = -0.3 * std::exp(-dt * static_cast<double>(l) / 1.5);
    lags[0] *= 0.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_gle({1.0, 1.0, 0.0}, dt, n, lags).q.back());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GleTrajectory)->RangeMultiplier(4)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_NoiseFactor(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd noise(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            noise(i, j) = std::exp(-0.05 * static_cast<double>(std::abs(i - j)));
    for (auto _ : state)
        benchmark::DoNotOptimize(noise_factor(noise));
}
BENCHMARK(BM_NoiseFactor)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}

BENCHMARK_MAIN();
