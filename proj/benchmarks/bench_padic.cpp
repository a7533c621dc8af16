#include <benchmark/benchmark.h>

#include "padiclz/padic.hpp"

using namespace padiclz;

namespace {

PadicScalar sample(const ContextPtr& ctx) {
    Poly c(ctx->degree());
    for (int i = 0; i < ctx->degree(); ++i) c[i] = mpz_class(1234567 + 89 * i);
    return PadicScalar::from_vector(ctx, c);
}

void BM_Multiply(benchmark::State& state) {
    const auto ctx = PadicContext::get(7, static_cast<int>(state.range(0)), 20);
    const auto x = sample(ctx), y = sample(ctx) + PadicScalar::one(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_Multiply)->Arg(1)->Arg(2)->Arg(4);

void BM_Inverse(benchmark::State& state) {
    const auto ctx = PadicContext::get(7, static_cast<int>(state.range(0)), 20);
    const auto x = sample(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(PadicScalar::one(ctx) / x);
}
BENCHMARK(BM_Inverse)->Arg(1)->Arg(2);

void BM_Log(benchmark::State& state) {
    const auto ctx = PadicContext::get(5, 1, static_cast<int>(state.range(0)));
    const auto x = sample(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(log_iwasawa(x));
}
BENCHMARK(BM_Log)->Arg(20)->Arg(40);

void BM_Teichmuller(benchmark::State& state) {
    const auto ctx = PadicContext::get(13, 2, 20);
    const auto x = sample(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(teichmuller(x));
}
BENCHMARK(BM_Teichmuller);

}  // namespace

BENCHMARK_MAIN();
