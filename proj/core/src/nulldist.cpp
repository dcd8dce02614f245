#include "cwm/nulldist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "cwm/csv.hpp"
#include "cwm/error.hpp"
#include "cwm/parallel.hpp"
#include "cwm/ranks.hpp"
#include "cwm/rng.hpp"
#include "cwm/statistic.hpp"

namespace cwm {

namespace {

void validate(std::span<const WeightFamily> families, std::size_t d, std::span<const double> alphas,
              const TabulationSettings& s) {
    if (families.empty()) throw InputError("no weight family to tabulate");
    for (const auto& f : families) {
        if (f.dim() != d) throw DimensionError("weight family " + f.name() + " does not have d = " + std::to_string(d));
    }
    if (s.draws < 1000) throw InputError("draws must be >= 1000");
    if (s.n_approx < 100) throw InputError("n_approx must be >= 100");
    if (alphas.empty()) throw InputError("no alpha levels given");
    for (const double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw InputError("alpha levels must lie in (0, 1)");
    }
}

}  // namespace

const CriticalValueEntry& CriticalValueTable::at(const std::string& family, double alpha) const {
    for (const auto& e : entries) {
        if (e.family == family && e.alpha == alpha) return e;
    }
    throw InputError("no critical value for " + family + " at alpha " + std::to_string(alpha));
}

std::vector<std::vector<double>> simulate_null_statistics(std::span<const WeightFamily> families,
                                                          const TabulationSettings& settings) {
    if (families.empty()) throw InputError("no weight family given");
    const std::size_t d = families.front().dim();
    const std::size_t n = settings.n_approx;
    const std::size_t F = families.size();
    const StatisticKernel kernel(n, {families.begin(), families.end()});

    std::vector<double> flat(settings.draws * F);
    parallel_for(settings.draws, resolve_threads(settings.threads), [&](std::size_t i) {
        Stream rng(settings.seed, i);
        std::vector<double> rows(n * d);
        for (auto& x : rows) x = rng.uniform_open();
        const auto pseudo = pseudo_observations(Sample(n, d, std::move(rows)));
        kernel.evaluate(pseudo.ranks(), std::span(flat).subspan(i * F, F));
    });

    std::vector<std::vector<double>> out(F, std::vector<double>(settings.draws));
    for (std::size_t i = 0; i < settings.draws; ++i)
        for (std::size_t f = 0; f < F; ++f) out[f][i] = flat[i * F + f];
    return out;
}

double upper_quantile(std::span<const double> sorted_values, double alpha) {
    if (sorted_values.empty()) throw InputError("no values to take a quantile of");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    const double draws = static_cast<double>(sorted_values.size());
    auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * draws));
    k = std::clamp<std::size_t>(k, 1, sorted_values.size());
    return sorted_values[k - 1];
}

CriticalValueTable tabulate_critical_values(std::span<const WeightFamily> families, std::size_t d,
                                            std::span<const double> alphas,
                                            const TabulationSettings& settings) {
    validate(families, d, alphas, settings);
    auto draws = simulate_null_statistics(families, settings);
    CriticalValueTable table;
    table.alphas.assign(alphas.begin(), alphas.end());
    for (std::size_t f = 0; f < families.size(); ++f) {
        std::sort(draws[f].begin(), draws[f].end());
        for (const double alpha : alphas) {
            table.entries.push_back({families[f].name(), d, alpha, upper_quantile(draws[f], alpha),
                                     settings.n_approx, settings.draws, settings.seed});
        }
    }
    return table;
}

CriticalValueTable tabulate_critical_values(const WeightFamily& family, std::size_t d,
                                            std::span<const double> alphas,
                                            const TabulationSettings& settings) {
    return tabulate_critical_values(std::span(&family, 1), d, alphas, settings);
}

void write_csv(const CriticalValueTable& table, std::ostream& out) {
    out << "family,d,alpha,critical_value,n_approx,draws,seed\n";
    for (const auto& e : table.entries) {
        out << csv_quote(e.family) << ',' << e.d << ',' << shortest(e.alpha) << ','
            << shortest(e.critical_value) << ',' << e.n_approx << ',' << e.draws << ',' << e.seed
            << '\n';
    }
}

CriticalValueTable read_critical_values_csv(std::istream& in) {
    CriticalValueTable table;
    std::string line;
    // Leading '#' lines carry provenance written by the CLI.
    while (std::getline(in, line) && line.starts_with('#')) {
    }
    if (!in || csv_split(line) != std::vector<std::string>{
            "family", "d", "alpha", "critical_value", "n_approx", "draws", "seed"}) {
        throw InputError("critical value CSV has an unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty() || line.starts_with('#')) continue;
        const auto cells = csv_split(line);
        if (cells.size() != 7) throw InputError("critical value row has " + std::to_string(cells.size()) + " cells");
        CriticalValueEntry e{cells[0],
                             static_cast<std::size_t>(parse_unsigned(cells[1])),
                             parse_real(cells[2]),
                             parse_real(cells[3]),
                             static_cast<std::size_t>(parse_unsigned(cells[4])),
                             static_cast<std::size_t>(parse_unsigned(cells[5])),
                             parse_unsigned(cells[6])};
        if (std::find(table.alphas.begin(), table.alphas.end(), e.alpha) == table.alphas.end()) {
            table.alphas.push_back(e.alpha);
        }
        table.entries.push_back(std::move(e));
    }
    return table;
}

}  // namespace cwm
