#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "cwm/copulas.hpp"
#include "cwm/permtest.hpp"
#include "cwm/ranks.hpp"
#include "cwm/rng.hpp"
#include "cwm/statistic.hpp"
#include "cwm/weights.hpp"

namespace {

cwm::PseudoObservations pseudo(std::size_t n, std::size_t d) {
    return cwm::pseudo_observations(cwm::sample_copula(cwm::CopulaModel::gaussian(0.3), n, 7, d));
}

void BM_Statistic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = pseudo(n, 2);
    const auto family = cwm::WeightFamily::uniform(2);
    for (auto _ : state) benchmark::DoNotOptimize(cwm::compute_statistic(p, family).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Statistic)->Arg(50)->Arg(500)->Complexity();

void BM_StatisticNaive(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = pseudo(n, 2);
    const auto family = cwm::WeightFamily::uniform(2);
    for (auto _ : state) benchmark::DoNotOptimize(cwm::compute_statistic_naive(p, family));
}
BENCHMARK(BM_StatisticNaive)->Arg(50)->Arg(500);

void BM_KernelAllFamilies(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const cwm::StatisticKernel kernel(n, cwm::standard_families(2));
    std::vector<std::uint32_t> ranks(2 * n);
    cwm::Stream rng(1, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        std::iota(ranks.begin() + j * n, ranks.begin() + (j + 1) * n, 1u);
        std::shuffle(ranks.begin() + j * n, ranks.begin() + (j + 1) * n, rng);
    }
    std::vector<double> out(5);
    for (auto _ : state) {
        kernel.evaluate(ranks, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_KernelAllFamilies)->Arg(50)->Arg(500);

void BM_PermutationTest(benchmark::State& state) {
    const auto p = pseudo(50, 2);
    const auto families = cwm::standard_families(2);
    const auto N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cwm::permutation_test(p, families, N, 1, 1));
}
BENCHMARK(BM_PermutationTest)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
