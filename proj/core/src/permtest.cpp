#include "cwm/permtest.hpp"

#include <algorithm>
#include <cmath>

#include "cwm/error.hpp"
#include "cwm/parallel.hpp"
#include "cwm/rng.hpp"
#include "cwm/statistic.hpp"

namespace cwm {

namespace {

constexpr double kTieTolerance = 1e-12;

}  // namespace

double permutation_p_value(double observed, std::span<const double> permuted) {
    const double threshold = observed - kTieTolerance * std::abs(observed);
    const auto hits = std::count_if(permuted.begin(), permuted.end(),
                                    [threshold](double w) { return w >= threshold; });
    return (0.5 + static_cast<double>(hits)) / (static_cast<double>(permuted.size()) + 1.0);
}

std::vector<TestResult> permutation_test(const PseudoObservations& pseudo,
                                         std::span<const WeightFamily> families, std::size_t N,
                                         std::uint64_t seed, std::size_t threads) {
    if (N < 19) throw InputError("need at least 19 permutations");
    const std::size_t n = pseudo.n();
    const std::size_t d = pseudo.d();
    const std::size_t F = families.size();
    const StatisticKernel kernel(n, {families.begin(), families.end()});

    std::vector<double> observed(F);
    kernel.evaluate(pseudo.ranks(), observed);

    std::vector<double> permuted(N * F);
    const auto original = pseudo.ranks();
    parallel_for(N, threads, [&](std::size_t k) {
        Stream rng(seed, k);
        std::vector<std::uint32_t> ranks(original.begin(), original.end());
        for (std::size_t j = 0; j < d; ++j) {
            auto first = ranks.begin() + static_cast<std::ptrdiff_t>(j * n);
            std::shuffle(first, first + static_cast<std::ptrdiff_t>(n), rng);
        }
        kernel.evaluate(ranks, std::span(permuted).subspan(k * F, F));
    });

    std::vector<TestResult> results;
    results.reserve(F);
    std::vector<double> column(N);
    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t k = 0; k < N; ++k) column[k] = permuted[k * F + f];
        results.push_back({observed[f], permutation_p_value(observed[f], column), N, seed, families[f],
                           n, d, std::nullopt});
    }
    return results;
}

TestResult permutation_test(const Sample& sample, const WeightFamily& family, std::size_t N,
                            std::uint64_t seed, std::size_t threads) {
    auto results = permutation_test(pseudo_observations(sample), std::span(&family, 1), N, seed, threads);
    return std::move(results.front());
}

bool reject(const TestResult& result, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    return result.p_value <= alpha;
}

TestResult decide(TestResult result, double alpha) {
    const bool r = reject(result, alpha);
    result.decision = Decision{alpha, r};
    return result;
}

}  // namespace cwm
