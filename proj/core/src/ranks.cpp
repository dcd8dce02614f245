#include "cwm/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cwm/error.hpp"

namespace cwm {

Sample::Sample(std::size_t n, std::size_t d, std::vector<double> row_major)
    : n_(n), d_(d), data_(std::move(row_major)) {
    if (n_ < 1) throw DimensionError("sample needs at least 1 row");
    if (d_ < 2) throw DimensionError("need at least 2 columns");
    if (data_.size() != n_ * d_) {
        throw InputError("sample data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(n_ * d_));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        if (!std::isfinite(data_[k])) {
            throw InputError("non-finite entry at row " + std::to_string(k / d_) + ", column " +
                             std::to_string(k % d_));
        }
    }
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionError("sample needs at least 1 row");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw InputError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                             " values, expected " + std::to_string(d));
        }
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return Sample(rows.size(), d, std::move(flat));
}

PseudoObservations::PseudoObservations(std::size_t n, std::size_t d,
                                       std::vector<std::uint32_t> column_major_ranks)
    : n_(n), d_(d), ranks_(std::move(column_major_ranks)), tie_flags_(d, 0) {
    if (n_ < 1) throw DimensionError("pseudo-observations need at least 1 row");
    if (d_ < 2) throw DimensionError("need at least 2 columns");
    if (ranks_.size() != n_ * d_) throw InputError("rank buffer size does not match n*d");
    std::vector<std::uint32_t> seen(n_ + 1);
    for (std::size_t j = 0; j < d_; ++j) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto r : column(j)) {
            if (r < 1 || r > n_) throw InputError("rank outside [1, n]");
            if (seen[r]++ > 0) tie_flags_[j] = 1;
        }
    }
}

bool PseudoObservations::any_ties() const noexcept {
    return std::any_of(tie_flags_.begin(), tie_flags_.end(), [](auto f) { return f != 0; });
}

std::vector<double> PseudoObservations::point(std::size_t i) const {
    std::vector<double> u(d_);
    for (std::size_t j = 0; j < d_; ++j) u[j] = value(i, j);
    return u;
}

PseudoObservations pseudo_observations(const Sample& sample) {
    const std::size_t n = sample.n();
    const std::size_t d = sample.d();
    std::vector<std::uint32_t> ranks(n * d);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return sample(a, j) < sample(b, j); });
        // Walk each run of equal values and give all of them the run's last position.
        std::size_t start = 0;
        while (start < n) {
            std::size_t stop = start + 1;
            while (stop < n && sample(order[stop], j) == sample(order[start], j)) ++stop;
            for (std::size_t k = start; k < stop; ++k) {
                ranks[j * n + order[k]] = static_cast<std::uint32_t>(stop);
            }
            start = stop;
        }
    }
    return PseudoObservations(n, d, std::move(ranks));
}

}  // namespace cwm
