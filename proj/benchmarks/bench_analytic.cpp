#include <benchmark/benchmark.h>

#include "chisum/lfunc.hpp"
#include "chisum/primes.hpp"

using namespace chisum;

namespace {

void BM_Hurwitz(benchmark::State& state) {
    const Complex s(0.75, static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hurwitz_zeta(s, 0.37));
}
BENCHMARK(BM_Hurwitz)->Arg(0)->Arg(50)->Arg(1000);

void BM_LValue(benchmark::State& state) {
    auto chi = enumerate_characters(FactoredModulus(u64{243}), true).front();
    for (auto _ : state) benchmark::DoNotOptimize(l_value(chi, Complex(0.9, 10.0)));
}
BENCHMARK(BM_LValue);

void BM_LValueSeries(benchmark::State& state) {
    auto chi = enumerate_characters(FactoredModulus(u64{243}), true).front();
    for (auto _ : state) benchmark::DoNotOptimize(l_value_series(chi, Complex(0.9, 10.0)));
}
BENCHMARK(BM_LValueSeries);

void BM_ZeroCount(benchmark::State& state) {
    FactoredModulus fq(static_cast<u64>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zero_count_rectangle(fq, 0.9, 10.0).count);
}
BENCHMARK(BM_ZeroCount)->Arg(27)->Arg(81)->Unit(benchmark::kMillisecond);

void BM_Sieve(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(psi_progression(x, 27, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->Arg(1'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
