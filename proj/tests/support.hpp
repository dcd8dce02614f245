#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "cwm/ranks.hpp"
#include "cwm/rng.hpp"

namespace cwm::test_support {

/// Tie-free pseudo-observations: each column an independent uniform permutation.
inline PseudoObservations random_pseudo(std::size_t n, std::size_t d, Stream& rng) {
    std::vector<std::uint32_t> ranks(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        auto first = ranks.begin() + static_cast<std::ptrdiff_t>(j * n);
        std::iota(first, first + static_cast<std::ptrdiff_t>(n), 1u);
        std::shuffle(first, first + static_cast<std::ptrdiff_t>(n), rng);
    }
    return PseudoObservations(n, d, std::move(ranks));
}

inline Sample random_sample(std::size_t n, std::size_t d, Stream& rng) {
    std::normal_distribution<double> z;
    std::vector<double> data(n * d);
    for (auto& x : data) x = z(rng);
    return Sample(n, d, std::move(data));
}

/// Sample with deliberate ties: entries drawn from a handful of levels.
inline Sample tied_sample(std::size_t n, std::size_t d, Stream& rng) {
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<double> data(n * d);
    for (auto& x : data) x = 0.5 * level(rng);
    return Sample(n, d, std::move(data));
}

inline double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-10);
}

}  // namespace cwm::test_support
