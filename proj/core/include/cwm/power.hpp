#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwm/copulas.hpp"
#include "cwm/weights.hpp"

namespace cwm {

struct GridPoint {
    double param;
    CopulaModel model;
};

/// Which copula parameter a grid varies.
enum class GridAxis { Primary, DegreesOfFreedom };

/// Grid from "start:stop:step" (inclusive of stop up to rounding) over the
/// primary parameter of `base` (rho, alpha, theta or gamma), or over the t
/// copula degrees of freedom.
std::vector<GridPoint> make_grid(const CopulaModel& base, std::string_view range, GridAxis axis = GridAxis::Primary);

struct PowerStudyConfig {
    std::string panel;
    std::vector<GridPoint> grid;
    std::size_t n = 50;
    std::size_t S = 300;
    std::size_t N = 250;
    double alpha = 0.10;
    std::vector<WeightFamily> families;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct PowerCurve {
    std::string panel;
    std::vector<std::string> families;  // canonical family names
    std::vector<double> params;
    std::size_t S = 0;
    /// rejections[f][g]: rejections of family f at grid point g.
    std::vector<std::vector<std::size_t>> rejections;

    double rate(std::size_t f, std::size_t g) const;
    double standard_error(std::size_t f, std::size_t g) const;
    std::size_t family_index(std::string_view name) const;
};

/// Seed of replicate s at a grid point. Derived from the parameter value, not
/// its position, so a single point can be replayed on its own.
std::uint64_t replicate_seed(std::uint64_t seed, double param, std::size_t replicate);

/// For every grid point and replicate: draws a copula sample, runs one
/// permutation test evaluating all families on the same permutations and
/// records rejections at level alpha.
PowerCurve run_power_study(const PowerStudyConfig& cfg);

struct PanelSummary {
    std::string panel;
    bool applicable = false;  // false for curves with fewer than two families
    std::optional<std::string> best;
    std::optional<std::string> worst;
    double max_gap = 0.0;
    double gap_param = 0.0;
};

/// Takes the grid point with the largest spread between families; the
/// families attaining its maximum and minimum are reported as best and worst,
/// provided they stay on their side of every other family at all grid points
/// up to two combined standard errors. Otherwise that side is empty ("none").
PanelSummary power_summary(const PowerCurve& curve);

/// CSV with header panel,family,param,rejections,S,rate,se.
void write_csv(const PowerCurve& curve, std::ostream& out);

}  // namespace cwm
