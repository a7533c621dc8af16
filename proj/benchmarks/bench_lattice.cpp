#include <benchmark/benchmark.h>

#include <random>

#include "padiclz/lattice.hpp"

using namespace padiclz;

namespace {

void BM_Bidual(benchmark::State& state) {
    const auto R = FiniteRing::integers_mod(state.range(0));
    std::mt19937_64 rng(1);
    const auto M = random_module(R, 3, 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(bidual(M, 2));
}
BENCHMARK(BM_Bidual)->Arg(4)->Arg(8);

void BM_BruteForce(benchmark::State& state) {
    const auto R = FiniteRing::integers_mod(state.range(0));
    std::mt19937_64 rng(1);
    const auto M = random_module(R, 3, 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_double_dual(M, 2));
}
BENCHMARK(BM_BruteForce)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
