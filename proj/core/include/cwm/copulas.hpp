#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "cwm/ranks.hpp"
#include "cwm/rng.hpp"

namespace cwm {

enum class CopulaFamily { Independence, Gaussian, StudentT, Gumbel, Clayton, Frank };

/// Parametric copula. Parameter ranges: Gaussian rho in [0, 1); StudentT rho in
/// [0, 1), k > 0; Gumbel alpha >= 1; Clayton theta >= 0; Frank gamma real.
/// Gaussian rho = 0, Gumbel alpha = 1, Clayton theta = 0 and Frank gamma = 0
/// are the independence copula.
class CopulaModel {
public:
    static CopulaModel independence();
    static CopulaModel gaussian(double rho);
    static CopulaModel student_t(double rho, double k);
    static CopulaModel gumbel(double alpha);
    static CopulaModel clayton(double theta);
    static CopulaModel frank(double gamma);

    /// "independence", "gaussian:0.4", "t:0.0,1.0", "gumbel:1.3", "clayton:0.6", "frank:2.0".
    static CopulaModel parse(std::string_view spec);

    CopulaFamily family() const noexcept { return family_; }
    /// rho, alpha, theta or gamma (0 for independence).
    double parameter() const noexcept { return p1_; }
    /// Degrees of freedom k for StudentT, 0 otherwise.
    double degrees_of_freedom() const noexcept { return p2_; }

    std::string name() const;
    bool is_independence() const noexcept;

private:
    CopulaModel(CopulaFamily family, double p1, double p2);

    CopulaFamily family_;
    double p1_;
    double p2_;
};

/// n i.i.d. draws with uniform (0, 1) margins. Gumbel, Clayton and Frank
/// require d = 2; Gaussian and StudentT use an equicorrelated d x d matrix.
Sample sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed, std::size_t d = 2);
Sample sample_copula(const CopulaModel& model, std::size_t n, Stream& rng, std::size_t d = 2);

/// Maps every entry through the standard normal quantile.
Sample to_normal_margins(const Sample& uniform_sample);

/// C(u1, u2). Gaussian and StudentT are evaluated by adaptive quadrature of the
/// conditional distribution (accuracy about 1e-9).
double copula_cdf(const CopulaModel& model, double u1, double u2);

struct TailDependence {
    double lower;
    double upper;
};

/// (lambda_L, lambda_U). Throws UnsupportedError for StudentT.
TailDependence tail_dependence(const CopulaModel& model);

}  // namespace cwm
