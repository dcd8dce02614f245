#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cwm/ranks.hpp"
#include "cwm/weights.hpp"

namespace cwm {

struct Decision {
    double alpha;
    bool reject;
};

struct TestResult {
    double statistic;
    double p_value;
    std::size_t n_permutations;
    std::uint64_t seed;
    WeightFamily family;
    std::size_t n;
    std::size_t d;
    std::optional<Decision> decision;
};

/// p = (1/2 + #{k : permuted_k >= observed}) / (N + 1). Permuted values within
/// a relative 1e-12 of the observed one count as ties (>=), so that
/// configurations equal in exact arithmetic are not split by rounding.
double permutation_p_value(double observed, std::span<const double> permuted);

/// Permutation test of mutual independence. Replicate k shuffles every column
/// of the rank matrix independently with stream (seed, k); ranks are
/// permutation-equivariant, so no re-ranking is needed. Requires N >= 19.
TestResult permutation_test(const Sample& sample, const WeightFamily& family, std::size_t N,
                            std::uint64_t seed, std::size_t threads = 1);

/// Several families evaluated on the same permutations.
std::vector<TestResult> permutation_test(const PseudoObservations& pseudo,
                                         std::span<const WeightFamily> families, std::size_t N,
                                         std::uint64_t seed, std::size_t threads = 1);

/// True iff p_value <= alpha. Throws InputError unless alpha is in (0, 1).
bool reject(const TestResult& result, double alpha);

/// Copy of `result` with its decision at level alpha filled in.
TestResult decide(TestResult result, double alpha);

}  // namespace cwm
