#include <benchmark/benchmark.h>

#include <random>

#include "highlight/rouge.hpp"

namespace {

highlight::TokenList random_text(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> w(0, 499);
    highlight::TokenList out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(w(rng)));
    return out;
}

void BM_RougeN(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto a = random_text(rng, std::size_t(state.range(0)));
    auto b = random_text(rng, std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(highlight::rouge_n(a, b, 2));
}
BENCHMARK(BM_RougeN)->Arg(50)->Arg(500);

void BM_RougeL(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto a = random_text(rng, std::size_t(state.range(0)));
    auto b = random_text(rng, std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(highlight::rouge_l(a, b));
}
BENCHMARK(BM_RougeL)->Arg(50)->Arg(500);

}  // namespace
