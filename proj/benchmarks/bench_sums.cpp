#include <benchmark/benchmark.h>

#include "chisum/expsums.hpp"

using namespace chisum;

namespace {

DirichletCharacter first_primitive(u64 q) { return enumerate_characters(FactoredModulus(q), true).front(); }

void BM_CharSumExact(benchmark::State& state) {
    const u64 q = static_cast<u64>(state.range(0));
    CharacterTable table(first_primitive(q));
    for (auto _ : state) benchmark::DoNotOptimize(char_sum(table, 0, q).value);
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(q));
}
BENCHMARK(BM_CharSumExact)->Arg(243)->Arg(6561)->Arg(59049);

void BM_CharacterTable(benchmark::State& state) {
    const u64 q = static_cast<u64>(state.range(0));
    FactoredModulus fq(q);
    ModulusTables tables(fq);
    auto chi = enumerate_characters(fq, true).back();
    for (auto _ : state) benchmark::DoNotOptimize(CharacterTable(chi, tables).order());
}
BENCHMARK(BM_CharacterTable)->Arg(6561)->Arg(1000000);

void BM_TwistedSum(benchmark::State& state) {
    CharacterTable table(first_primitive(3125));
    auto G = RealPolynomial::from_rationals({Rational(0), Rational(1, 7), Rational(3, 11), Rational(1, 13)});
    for (auto _ : state) benchmark::DoNotOptimize(twisted_sum(table, 17, 100000, G).value);
}
BENCHMARK(BM_TwistedSum);

void BM_DirichletPoly(benchmark::State& state) {
    CharacterTable table(first_primitive(81));
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_poly(table, 100000, 100000, 1000.0).value);
}
BENCHMARK(BM_DirichletPoly);

void BM_DirichletPolyTaylor(benchmark::State& state) {
    CharacterTable table(first_primitive(81));
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_poly_taylor(table, 100000, 100000, 1000.0).value);
}
BENCHMARK(BM_DirichletPolyTaylor);

void BM_Decompose(benchmark::State& state) {
    auto chi = first_primitive(729);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(chi, 0, 1458, RealPolynomial(), 3).residual);
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

}  // namespace
