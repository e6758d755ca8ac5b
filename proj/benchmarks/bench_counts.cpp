#include <benchmark/benchmark.h>

#include "chisum/postnikov.hpp"
#include "chisum/vinogradov.hpp"

using namespace chisum;

namespace {

void BM_CountVinogradov(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const u64 P = static_cast<u64>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(count_vinogradov(k, k, P));
}
BENCHMARK(BM_CountVinogradov)->Args({2, 100})->Args({3, 40})->Args({4, 20})->Unit(benchmark::kMillisecond);

void BM_KorobovCheck(benchmark::State& state) {
    std::vector<KorobovCoefficient> g(3);
    g[0].exact = Rational(1, 7);
    g[1].exact = Rational(2, 15);
    g[2].exact = Rational(11, 47);
    for (auto& c : g) c.value = c.exact->get_d();
    for (auto _ : state) benchmark::DoNotOptimize(korobov_check(g, 3, 25).holds);
}
BENCHMARK(BM_KorobovCheck)->Unit(benchmark::kMillisecond);

void BM_FindPostnikov(benchmark::State& state) {
    auto chi = enumerate_characters(FactoredModulus(u64{2187}), true).back();
    for (auto _ : state) benchmark::DoNotOptimize(find_postnikov_m(chi, 14));
}
BENCHMARK(BM_FindPostnikov)->Unit(benchmark::kMicrosecond);

}  // namespace
