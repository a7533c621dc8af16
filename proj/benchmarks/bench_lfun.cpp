#include <benchmark/benchmark.h>

#include "padiclz/lfun.hpp"

using namespace padiclz;

namespace {

void BM_KLSeries(benchmark::State& state) {
    const auto chi = DirichletCharacter::kronecker(-3);
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kl_series(chi, 1, 5, 4, M, 20));
}
BENCHMARK(BM_KLSeries)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_KatzCyclotomic(benchmark::State& state) {
    const auto s = HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3));
    for (auto _ : state) benchmark::DoNotOptimize(katz_cyclotomic(s));
}
BENCHMARK(BM_KatzCyclotomic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
