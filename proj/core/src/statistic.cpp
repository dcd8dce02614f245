#include "cwm/statistic.hpp"

#include <algorithm>
#include <string>

#include "cwm/error.hpp"
#include "cwm/summation.hpp"

namespace cwm {

namespace {

constexpr double kNegativeTolerance = 1e-12;

void check_families(std::size_t d, std::span<const WeightFamily> families) {
    if (families.empty()) throw InputError("no weight family given");
    for (const auto& f : families) {
        if (f.dim() != d) {
            throw DimensionError("weight family " + f.name() + " has dimension " +
                                 std::to_string(f.dim()) + ", data has " + std::to_string(d));
        }
    }
}

}  // namespace

double clamp_statistic(double value) {
    if (value < -kNegativeTolerance) {
        throw ConsistencyError("statistic evaluated to " + std::to_string(value));
    }
    return std::max(value, 0.0);
}

StatisticKernel::StatisticKernel(std::size_t n, std::vector<WeightFamily> families)
    : n_(n), d_(families.empty() ? 0 : families.front().dim()), families_(std::move(families)) {
    if (n_ < 1) throw DimensionError("statistic needs n >= 1");
    check_families(d_, families_);
    const std::size_t F = families_.size();
    mu1_.assign(d_, std::vector<double>((n_ + 1) * F));
    mu2_.assign(d_, std::vector<double>((n_ + 1) * F));
    n_mu3_.resize(F);
    for (std::size_t f = 0; f < F; ++f) {
        const auto& fam = families_[f];
        for (std::size_t j = 0; j < d_; ++j) {
            for (std::size_t k = 0; k <= n_; ++k) {
                const double a = static_cast<double>(k) / static_cast<double>(n_);
                mu1_[j][k * F + f] = fam.mu1_factor(j, a);
                mu2_[j][k * F + f] = fam.mu2_factor(j, a);
            }
        }
        n_mu3_[f] = static_cast<double>(n_) * fam.mu3();
    }
}

void StatisticKernel::evaluate(std::span<const std::uint32_t> ranks, std::span<double> out) const {
    const std::size_t F = families_.size();
    if (ranks.size() != n_ * d_) throw DimensionError("rank buffer does not match kernel size");
    if (out.size() != F) throw DimensionError("output buffer does not match family count");

    const double inv_n = 1.0 / static_cast<double>(n_);
    std::vector<NeumaierSum> total(F);
    std::vector<double> off(F);
    std::vector<double> diag(F);
    std::vector<double> mu2(F);

    for (std::size_t i = 0; i < n_; ++i) {
        std::fill(off.begin(), off.end(), 0.0);
        std::fill(diag.begin(), diag.end(), 1.0);
        std::fill(mu2.begin(), mu2.end(), 1.0);
        for (std::size_t j = 0; j < d_; ++j) {
            const std::size_t r = ranks[j * n_ + i];
            const double* m1 = mu1_[j].data() + r * F;
            const double* m2 = mu2_[j].data() + r * F;
            for (std::size_t f = 0; f < F; ++f) {
                diag[f] *= m1[f];
                mu2[f] *= m2[f];
            }
        }
        // mu1(U_i v U_l) is symmetric in (i, l): sum l < i and count it twice.
        if (d_ == 2) {
            const std::uint32_t* c0 = ranks.data();
            const std::uint32_t* c1 = ranks.data() + n_;
            const double* t0 = mu1_[0].data();
            const double* t1 = mu1_[1].data();
            const std::uint32_t ri0 = c0[i];
            const std::uint32_t ri1 = c1[i];
            for (std::size_t l = 0; l < i; ++l) {
                const double* p0 = t0 + std::max(ri0, c0[l]) * F;
                const double* p1 = t1 + std::max(ri1, c1[l]) * F;
                for (std::size_t f = 0; f < F; ++f) off[f] += p0[f] * p1[f];
            }
        } else {
            for (std::size_t l = 0; l < i; ++l) {
                for (std::size_t f = 0; f < F; ++f) {
                    double p = 1.0;
                    for (std::size_t j = 0; j < d_; ++j) {
                        const std::size_t k = std::max(ranks[j * n_ + i], ranks[j * n_ + l]);
                        p *= mu1_[j][k * F + f];
                    }
                    off[f] += p;
                }
            }
        }
        for (std::size_t f = 0; f < F; ++f) {
            total[f].add((diag[f] + 2.0 * off[f]) * inv_n);
            total[f].add(-2.0 * mu2[f]);
        }
    }
    for (std::size_t f = 0; f < F; ++f) {
        total[f].add(n_mu3_[f]);
        out[f] = clamp_statistic(total[f].value());
    }
}

std::vector<double> compute_statistics(const PseudoObservations& pseudo,
                                       std::span<const WeightFamily> families) {
    check_families(pseudo.d(), families);
    StatisticKernel kernel(pseudo.n(), {families.begin(), families.end()});
    std::vector<double> out(families.size());
    kernel.evaluate(pseudo.ranks(), out);
    return out;
}

StatisticValue compute_statistic(const PseudoObservations& pseudo, const WeightFamily& family) {
    const auto values = compute_statistics(pseudo, std::span(&family, 1));
    return {values.front(), pseudo.n(), pseudo.d(), family};
}

double compute_statistic_naive(const PseudoObservations& pseudo, const WeightFamily& family) {
    check_families(pseudo.d(), std::span(&family, 1));
    const std::size_t n = pseudo.n();
    const std::size_t d = pseudo.d();
    std::vector<double> a(d);
    NeumaierSum total;
    for (std::size_t i = 0; i < n; ++i) {
        NeumaierSum row;
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t j = 0; j < d; ++j) a[j] = std::max(pseudo.value(i, j), pseudo.value(l, j));
            row.add(family.mu1(a));
        }
        total.add(row.value() / static_cast<double>(n));
        total.add(-2.0 * family.mu2(pseudo.point(i)));
    }
    total.add(static_cast<double>(n) * family.mu3());
    return clamp_statistic(total.value());
}

}  // namespace cwm
