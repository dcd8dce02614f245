#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cwm {

/// n x d matrix of finite observations, stored row-major.
class Sample {
public:
    /// Throws InputError on non-finite entries or a size mismatch, and
    /// DimensionError when n < 1 or d < 2.
    Sample(std::size_t n, std::size_t d, std::vector<double> row_major);

    static Sample from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * d_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> data_;
};

/// Normalized ranks k/n of a sample. Ranks are stored as integers, column-major,
/// so that columns can be permuted independently without touching the others.
class PseudoObservations {
public:
    /// Builds from integer ranks in [1, n], column-major (column j occupies
    /// ranks[j*n, (j+1)*n)). Tie flags are derived from the ranks.
    PseudoObservations(std::size_t n, std::size_t d, std::vector<std::uint32_t> column_major_ranks);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }

    std::uint32_t rank(std::size_t i, std::size_t j) const noexcept { return ranks_[j * n_ + i]; }
    double value(std::size_t i, std::size_t j) const noexcept {
        return static_cast<double>(rank(i, j)) / static_cast<double>(n_);
    }
    std::span<const std::uint32_t> column(std::size_t j) const noexcept {
        return {ranks_.data() + j * n_, n_};
    }
    std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }

    /// True when column j contains duplicated values in the source data.
    bool tied(std::size_t j) const noexcept { return tie_flags_[j] != 0; }
    bool any_ties() const noexcept;

    /// Row i as a point in (0, 1]^d.
    std::vector<double> point(std::size_t i) const;

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<std::uint32_t> ranks_;
    std::vector<std::uint8_t> tie_flags_;
};

/// u[i][j] = #{l : x[l][j] <= x[i][j]} / n. Tied values share the maximum rank.
PseudoObservations pseudo_observations(const Sample& sample);

}  // namespace cwm
