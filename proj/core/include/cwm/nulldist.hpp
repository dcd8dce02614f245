#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cwm/weights.hpp"

namespace cwm {

struct CriticalValueEntry {
    std::string family;  // canonical WeightFamily::name()
    std::size_t d;
    double alpha;
    double critical_value;
    std::size_t n_approx;
    std::size_t draws;
    std::uint64_t seed;
};

struct CriticalValueTable {
    std::vector<double> alphas;
    std::vector<CriticalValueEntry> entries;

    /// Entry for (family name, alpha); throws InputError when absent.
    const CriticalValueEntry& at(const std::string& family, double alpha) const;
};

struct TabulationSettings {
    std::size_t draws = 20000;
    std::size_t n_approx = 500;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: resolve_threads default
};

/// Null draws of W_{n_approx} for each family: draw i uses stream (seed, i),
/// generates n_approx i.i.d. Uniform[0,1]^d rows and evaluates every family
/// on the same sample. Returns one vector of `draws` values per family, in
/// draw order, independent of the thread count.
std::vector<std::vector<double>> simulate_null_statistics(std::span<const WeightFamily> families,
                                                          const TabulationSettings& settings);

/// Upper-alpha critical value as the ceil((1 - alpha) * draws)-th order statistic.
double upper_quantile(std::span<const double> sorted_values, double alpha);

/// Approximate asymptotic critical values of W by large-n simulation under
/// independence. Requires draws >= 1000, n_approx >= 100 and alphas in (0, 1).
CriticalValueTable tabulate_critical_values(const WeightFamily& family, std::size_t d,
                                            std::span<const double> alphas,
                                            const TabulationSettings& settings);

/// Several families sharing the same null draws.
CriticalValueTable tabulate_critical_values(std::span<const WeightFamily> families, std::size_t d,
                                            std::span<const double> alphas,
                                            const TabulationSettings& settings);

/// CSV with header family,d,alpha,critical_value,n_approx,draws,seed. Doubles
/// use the shortest round-trip representation.
void write_csv(const CriticalValueTable& table, std::ostream& out);
/// Reads write_csv output; lines starting with '#' and blank lines are skipped.
CriticalValueTable read_critical_values_csv(std::istream& in);

}  // namespace cwm
