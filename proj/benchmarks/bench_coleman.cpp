#include <benchmark/benchmark.h>

#include "padiclz/coleman.hpp"

using namespace padiclz;

namespace {

void BM_SolveColeman(benchmark::State& state) {
    TowerParams t;
    t.kind = TowerKind::UnitFromRec;
    t.p = 5;
    t.levels = static_cast<int>(state.range(0));
    t.precision = 20;
    t.u = 7;
    const auto tower = build_cyclotomic_tower(t);
    for (auto _ : state) benchmark::DoNotOptimize(solve_coleman(tower));
}
BENCHMARK(BM_SolveColeman)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LogTilde(benchmark::State& state) {
    TowerParams t;
    t.kind = TowerKind::CyclotomicUnit;
    t.p = 5;
    t.levels = 3;
    t.precision = 20;
    t.a = 6;
    const auto g = solve_coleman(build_cyclotomic_tower(t));
    for (auto _ : state) benchmark::DoNotOptimize(log_tilde(g));
}
BENCHMARK(BM_LogTilde)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
