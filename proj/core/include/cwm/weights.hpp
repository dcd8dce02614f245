#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cwm {

enum class WeightKind { Uniform, Median, SymmetricTail, UpperTail, LowerTail, Deheuvels };

/// A product weight w(u) = prod_j w_j(u_j) on [0,1]^d together with the closed
/// forms of its moment maps
///
///   mu1(a) = int_{[a,1]} w(u) du
///   mu2(a) = int_{[a,1]} (prod_j u_j) w(u) du
///   mu3    = int_{[0,1]^d} (prod_j u_j^2) w(u) du
///
/// which make the weighted statistic computable from ranks. Because every
/// family is a product weight, each map is a product of univariate factors.
class WeightFamily {
public:
    static WeightFamily uniform(std::size_t d);
    /// w(u) = prod u_j (1 - u_j)
    static WeightFamily median(std::size_t d);
    /// w(u) = prod (u_j - 1/2)^2
    static WeightFamily symmetric_tail(std::size_t d);
    /// w(u) = prod u_j^2
    static WeightFamily upper_tail(std::size_t d);
    /// w(u) = prod (1 - u_j)^2
    static WeightFamily lower_tail(std::size_t d);
    /// w(u) = prod u_j^(2 beta_j), each beta_j > -1/2.
    static WeightFamily deheuvels(std::vector<double> beta);

    /// Parses "uniform", "median", "tails", "upper", "lower" or
    /// "deheuvels:b1,...,bd". A single deheuvels exponent is broadcast to d.
    static WeightFamily parse(std::string_view spec, std::size_t d);

    WeightKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return d_; }
    std::span<const double> beta() const noexcept { return beta_; }

    /// Canonical spec string, accepted by parse().
    std::string name() const;
    /// Conventional statistic symbol: U_n, M_n, T_n, P_n, L_n, D_n.
    std::string_view symbol() const noexcept;

    double value(std::span<const double> u) const;
    double mu1(std::span<const double> a) const;
    double mu2(std::span<const double> a) const;
    double mu3() const noexcept;

    // Univariate factors for coordinate j.
    double weight_factor(std::size_t j, double u) const noexcept;
    double mu1_factor(std::size_t j, double a) const noexcept;
    double mu2_factor(std::size_t j, double a) const noexcept;
    double mu3_factor(std::size_t j) const noexcept;

    friend bool operator==(const WeightFamily&, const WeightFamily&) = default;

private:
    WeightFamily(WeightKind kind, std::size_t d, std::vector<double> beta);
    void check_dim(std::size_t size) const;

    WeightKind kind_;
    std::size_t d_;
    std::vector<double> beta_;
};

/// The five named families (uniform, median, tails, upper, lower) in that order.
std::vector<WeightFamily> standard_families(std::size_t d);

/// Parses a comma-separated list of family specs, or "all" for standard_families(d).
/// Numeric tokens following a deheuvels entry are read as its further exponents,
/// so "uniform,deheuvels:0.5,1,tails" yields three families.
std::vector<WeightFamily> parse_families(std::string_view list, std::size_t d);

/// Numeric quadrature of the d = 2 Anderson-Darling weight
/// [u1 u2 (u1 - 1)(u2 - 1)]^{-1} over [eps, 1 - eps]^2. The value diverges as
/// eps -> 0, which is why no Anderson-Darling statistic is offered.
double anderson_darling_truncated_mass(double eps);

}  // namespace cwm
