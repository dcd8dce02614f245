#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cwm/ranks.hpp"
#include "cwm/weights.hpp"

namespace cwm {

struct StatisticValue {
    double value;
    std::size_t n;
    std::size_t d;
    WeightFamily family;
};

/// Weighted Cramer-von Mises statistic
///
///   W_n = n int (C_n(u) - prod u_j)^2 w(u) du
///       = sum_i [ (1/n) sum_l mu1(U_i v U_l) - 2 mu2(U_i) ] + n mu3
///
/// where v is the coordinate-wise maximum. O(n^2 d).
StatisticValue compute_statistic(const PseudoObservations& pseudo, const WeightFamily& family);

/// Same statistic for several families in one pass over the pairs.
std::vector<double> compute_statistics(const PseudoObservations& pseudo,
                                       std::span<const WeightFamily> families);

/// Reference evaluation: full double loop over (i, l) calling family.mu1 on
/// every coordinate-wise maximum. No tables and no symmetric-pair folding.
double compute_statistic_naive(const PseudoObservations& pseudo, const WeightFamily& family);

/// Precomputed per-rank moment tables for a fixed n and a set of families.
/// Pseudo-observations only take the values k/n, so mu1(U_i v U_l) reduces
/// to a product of table lookups at max(rank_i, rank_l). One kernel can
/// evaluate any number of rank configurations of the same size, which is how
/// permutation and null-distribution loops use it.
class StatisticKernel {
public:
    StatisticKernel(std::size_t n, std::vector<WeightFamily> families);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    std::span<const WeightFamily> families() const noexcept { return families_; }

    /// ranks: column-major n x d ranks in [1, n]. Writes one value per family.
    void evaluate(std::span<const std::uint32_t> ranks, std::span<double> out) const;

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<WeightFamily> families_;
    // Per coordinate j: entry (k * F + f) holds the family-f factor at k/n, k = 0..n.
    std::vector<std::vector<double>> mu1_;
    std::vector<std::vector<double>> mu2_;
    std::vector<double> n_mu3_;
};

/// Clamps tiny negative rounding residue to zero; throws ConsistencyError when
/// the value is below -1e-12.
double clamp_statistic(double value);

}  // namespace cwm
