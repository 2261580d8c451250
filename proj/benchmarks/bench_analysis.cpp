#include <boson/annealing.hpp>
#include <boson/bounds.hpp>
#include <boson/majorization.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace boson;

void BM_ClassicalBoundCurve(benchmark::State& state) {
    const auto grid = logspace(1e-3, 1e3, 201);
    for (auto _ : state) benchmark::DoNotOptimize(classical_bound_curve(grid));
}
BENCHMARK(BM_ClassicalBoundCurve);

void BM_ThermalBoundCurve(benchmark::State& state) {
    const auto grid = linspace(0.0, 1.0, 101);
    for (auto _ : state) benchmark::DoNotOptimize(thermal_bound_curve(0.5, grid));
}
BENCHMARK(BM_ThermalBoundCurve);

void BM_RegionGrid(benchmark::State& state) {
    const auto pts = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(region_grid(0.7, 0.6, pts, pts));
}
BENCHMARK(BM_RegionGrid)->Arg(51)->Arg(201);

void BM_RandomMajorizationSweep(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(random_majorization_sweep(100, 10, 0.85, 42));
}
BENCHMARK(BM_RandomMajorizationSweep)->Unit(benchmark::kMillisecond);

void BM_Anneal(benchmark::State& state) {
    AnnealConfig config;
    config.crosscheck_every = 0;
    const FockVector start = fock_state(6, config.input_dim);
    for (auto _ : state) benchmark::DoNotOptimize(anneal_min_entropy(config, start));
}
BENCHMARK(BM_Anneal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
