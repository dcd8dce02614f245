#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cwm/ranks.hpp"
#include "cwm/weights.hpp"

namespace cwm {

enum class OracleMode {
    /// d = 2 only. Integrates exactly on the cells cut by the distinct rank
    /// values, where C_n is constant and the integrand is polynomial.
    ExactPiecewise,
    /// d in {2, 3}. Midpoint rule on m^d cells with C_n taken at cell centers.
    GridQuadrature,
};

struct OracleConfig {
    OracleMode mode = OracleMode::ExactPiecewise;
    std::size_t grid_points_per_axis = 256;
};

/// Brute-force n * int (C_n(u) - prod u_j)^2 w(u) du, evaluated without the
/// moment maps. Throws DimensionError for unsupported mode/dimension pairs and
/// InputError when grid_points_per_axis < 16.
double oracle_statistic(const PseudoObservations& pseudo, const WeightFamily& family,
                        const OracleConfig& cfg = {});

struct ValidationOptions {
    std::size_t cases = 100;
    std::uint64_t seed = 20240607;
    std::size_t max_n = 30;
    double tolerance = 1e-9;
    /// Negative control: perturbs mu2 by a relative 1e-3 in the closed form.
    bool inject_mu2_fault = false;
};

struct FamilyValidation {
    std::string family;
    std::size_t cases = 0;
    double max_relative_error = 0.0;
    bool passed = true;
};

struct ValidationReport {
    std::vector<FamilyValidation> families;
    /// Human-readable descriptions of every failed check.
    std::vector<std::string> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Closed form vs ExactPiecewise oracle on random tie-free d = 2 samples for
/// the five named families plus a Deheuvels family, after the fixed-point
/// checks (n = 1 equals mu3; the two-point comonotone uniform case is 19/288).
ValidationReport run_validation(const ValidationOptions& options);

}  // namespace cwm
