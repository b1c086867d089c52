#include <benchmark/benchmark.h>

#include "nkspin/nkgeom.hpp"
#include "nkspin/sampling.hpp"
#include "nkspin/spinor.hpp"

using namespace nkspin;

static void BM_QuatMul(benchmark::State& state) {
    const SampleSet s = uniform_s3(1, 1024);
    Quat acc{1.0};
    std::size_t i = 0;
    for (auto _ : state) {
        acc = acc * s[i++ & 1023].quat();
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_QuatMul);

static void BM_UniformS3(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(uniform_s3(7, static_cast<std::size_t>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UniformS3)->Arg(1000)->Arg(20000);

static void BM_GkCheck(benchmark::State& state) {
    const SampleSet s = uniform_s3(2, 1000);
    const SpinorField psi = families::conj_b(kJ);
    for (auto _ : state) benchmark::DoNotOptimize(gk_check(psi, s));
}
BENCHMARK(BM_GkCheck)->Unit(benchmark::kMillisecond);

static void BM_SystemResiduals(benchmark::State& state) {
    const SampleSet s = uniform_s3(3, 1000);
    const auto d = decompose_valpha(families::b_inverse(kK));
    for (auto _ : state) benchmark::DoNotOptimize(system_residuals(d, s));
}
BENCHMARK(BM_SystemResiduals)->Unit(benchmark::kMillisecond);

static void BM_FitGeometry(benchmark::State& state) {
    const SampleSet s = uniform_s3(4, 20000);
    const auto F = LagrangianFamily::gamma3(kJ);
    for (auto _ : state) benchmark::DoNotOptimize(fit_geometry(F, s));
}
BENCHMARK(BM_FitGeometry)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
