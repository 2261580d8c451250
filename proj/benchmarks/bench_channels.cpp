#include <boson/channels.hpp>
#include <boson/random.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace boson;

void BM_FockOutputEigenvalues(benchmark::State& state) {
    const auto k = static_cast<Index>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fock_output_eigenvalues(k, 0.85, 41));
}
BENCHMARK(BM_FockOutputEigenvalues)->Arg(1)->Arg(6)->Arg(20);

void BM_KernelBuild(benchmark::State& state) {
    const auto d = static_cast<Index>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ClassicalNoiseKernel(0.85, d, 4 * d));
}
BENCHMARK(BM_KernelBuild)->Arg(11)->Arg(32);

// The annealer's inner loop: pure input through a prebuilt kernel, then the spectrum.
void BM_PureStateOutputEntropy(benchmark::State& state) {
    Rng rng(7);
    const FockVector psi = random_pure_state(rng, 11);
    const ClassicalNoiseKernel kernel(0.85, 11, 41);
    for (auto _ : state) {
        const Matrix out = kernel.apply(psi.amps());
        benchmark::DoNotOptimize(von_neumann_entropy(spectrum(out)));
    }
}
BENCHMARK(BM_PureStateOutputEntropy);

void BM_ClassicalNoise(benchmark::State& state) {
    const auto method = state.range(0) == 0 ? ClassicalMethod::FockAnalytic : ClassicalMethod::Quadrature;
    Rng rng(11);
    const DensityMatrix rho = random_pure_state(rng, 16).projector();
    ChannelOptions opts;
    opts.output_dim = 41;
    opts.allow_truncation = true;
    for (auto _ : state) benchmark::DoNotOptimize(apply_classical_noise(rho, 0.85, method, opts));
}
BENCHMARK(BM_ClassicalNoise)->Arg(0)->Arg(1)->ArgNames({"quadrature"});

void BM_ThermalNoise(benchmark::State& state) {
    const auto method = state.range(0) == 0 ? ThermalMethod::Dilation : ThermalMethod::Decomposition;
    Rng rng(13);
    const DensityMatrix rho = random_pure_state(rng, 16).projector();
    ChannelOptions opts;
    opts.output_dim = 32;
    opts.allow_truncation = true;
    for (auto _ : state) benchmark::DoNotOptimize(apply_thermal_noise(rho, 0.7, 0.6, method, opts));
}
BENCHMARK(BM_ThermalNoise)->Arg(0)->Arg(1)->ArgNames({"decomposition"});

void BM_Spectrum(benchmark::State& state) {
    const auto d = static_cast<Index>(state.range(0));
    Rng rng(17);
    const DensityMatrix out = pure_state_output_matrix(random_pure_state(rng, 11), 0.85, d);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(out));
}
BENCHMARK(BM_Spectrum)->Arg(41)->Arg(128);

}  // namespace
