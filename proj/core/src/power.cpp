#include "cwm/power.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "cwm/csv.hpp"
#include "cwm/error.hpp"
#include "cwm/parallel.hpp"
#include "cwm/permtest.hpp"
#include "cwm/rng.hpp"

namespace cwm {

namespace {

CopulaModel with_param(const CopulaModel& base, double value, GridAxis axis) {
    if (axis == GridAxis::DegreesOfFreedom) {
        if (base.family() != CopulaFamily::StudentT) throw InputError("degrees-of-freedom grids need a t copula");
        return CopulaModel::student_t(base.parameter(), value);
    }
    switch (base.family()) {
        case CopulaFamily::Gaussian: return CopulaModel::gaussian(value);
        case CopulaFamily::StudentT: return CopulaModel::student_t(value, base.degrees_of_freedom());
        case CopulaFamily::Gumbel: return CopulaModel::gumbel(value);
        case CopulaFamily::Clayton: return CopulaModel::clayton(value);
        case CopulaFamily::Frank: return CopulaModel::frank(value);
        case CopulaFamily::Independence: break;
    }
    throw InputError("the independence copula has no parameter to vary");
}

}  // namespace

std::vector<GridPoint> make_grid(const CopulaModel& base, std::string_view range, GridAxis axis) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = range.find(':', start);
        parts.push_back(parse_real(range.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    std::vector<double> values;
    if (parts.size() == 1) {
        values.push_back(parts[0]);
    } else if (parts.size() == 3) {
        const double lo = parts[0], hi = parts[1], step = parts[2];
        if (!(step > 0.0) || !(hi >= lo)) throw InputError("grid needs start <= stop and a positive step");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (count > 10000) throw InputError("grid has too many points");
        for (std::size_t k = 0; k < count; ++k) {
            // Snap to 1e-12 so accumulated step drift does not leak into replicate seeds.
            const double v = lo + static_cast<double>(k) * step;
            values.push_back(std::round(v * 1e12) / 1e12);
        }
    } else {
        throw InputError("grid must be 'value' or 'start:stop:step'");
    }
    std::vector<GridPoint> grid;
    grid.reserve(values.size());
    for (const double v : values) grid.push_back({v, with_param(base, v, axis)});
    return grid;
}

double PowerCurve::rate(std::size_t f, std::size_t g) const {
    return static_cast<double>(rejections.at(f).at(g)) / static_cast<double>(S);
}

double PowerCurve::standard_error(std::size_t f, std::size_t g) const {
    const double p = rate(f, g);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(S));
}

std::size_t PowerCurve::family_index(std::string_view name) const {
    const auto it = std::find(families.begin(), families.end(), name);
    if (it == families.end()) throw InputError("family '" + std::string(name) + "' is not in the curve");
    return static_cast<std::size_t>(it - families.begin());
}

std::uint64_t replicate_seed(std::uint64_t seed, double param, std::size_t replicate) {
    return derive_seed(seed, std::bit_cast<std::uint64_t>(param), replicate);
}

PowerCurve run_power_study(const PowerStudyConfig& cfg) {
    if (cfg.S < 50) throw InputError("power study needs S >= 50");
    if (cfg.N < 99) throw InputError("power study needs N >= 99");
    if (cfg.grid.empty()) throw InputError("power study grid is empty");
    if (cfg.families.empty()) throw InputError("power study needs at least one weight family");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (cfg.n < 2) throw InputError("power study needs n >= 2");

    const std::size_t G = cfg.grid.size();
    const std::size_t F = cfg.families.size();
    std::vector<std::uint8_t> rejected(G * cfg.S * F, 0);

    parallel_for(G * cfg.S, resolve_threads(cfg.threads), [&](std::size_t idx) {
        const std::size_t g = idx / cfg.S;
        const std::size_t s = idx % cfg.S;
        const std::uint64_t key = replicate_seed(cfg.seed, cfg.grid[g].param, s);
        Stream rng(key, 0);
        const auto sample = sample_copula(cfg.grid[g].model, cfg.n, rng);
        const auto results = permutation_test(pseudo_observations(sample), cfg.families, cfg.N,
                                              derive_seed(key, 1));
        for (std::size_t f = 0; f < F; ++f) rejected[idx * F + f] = reject(results[f], cfg.alpha) ? 1 : 0;
    });

    PowerCurve curve;
    curve.panel = cfg.panel;
    curve.S = cfg.S;
    for (const auto& fam : cfg.families) curve.families.push_back(fam.name());
    for (const auto& p : cfg.grid) curve.params.push_back(p.param);
    curve.rejections.assign(F, std::vector<std::size_t>(G, 0));
    for (std::size_t g = 0; g < G; ++g)
        for (std::size_t s = 0; s < cfg.S; ++s)
            for (std::size_t f = 0; f < F; ++f) curve.rejections[f][g] += rejected[(g * cfg.S + s) * F + f];
    return curve;
}

PanelSummary power_summary(const PowerCurve& curve) {
    PanelSummary summary;
    summary.panel = curve.panel;
    const std::size_t F = curve.families.size();
    const std::size_t G = curve.params.size();
    if (F < 2 || G == 0) return summary;
    summary.applicable = true;

    std::size_t gap_point = 0;
    std::size_t hi_family = 0;
    std::size_t lo_family = 0;
    summary.max_gap = -1.0;
    for (std::size_t g = 0; g < G; ++g) {
        std::size_t hi = 0, lo = 0;
        for (std::size_t f = 1; f < F; ++f) {
            if (curve.rate(f, g) > curve.rate(hi, g)) hi = f;
            if (curve.rate(f, g) < curve.rate(lo, g)) lo = f;
        }
        const double gap = curve.rate(hi, g) - curve.rate(lo, g);
        if (gap > summary.max_gap) {
            summary.max_gap = gap;
            gap_point = g;
            hi_family = hi;
            lo_family = lo;
        }
    }
    summary.gap_param = curve.params[gap_point];

    // Candidate must not fall below (above) any other family anywhere beyond noise.
    const auto dominates = [&](std::size_t cand, int sign) {
        for (std::size_t g = 0; g < G; ++g) {
            for (std::size_t f = 0; f < F; ++f) {
                if (f == cand) continue;
                const double slack = 2.0 * std::hypot(curve.standard_error(cand, g), curve.standard_error(f, g));
                if (sign * (curve.rate(f, g) - curve.rate(cand, g)) > slack) return false;
            }
        }
        return true;
    };
    if (summary.max_gap > 0.0) {
        if (dominates(hi_family, +1)) summary.best = curve.families[hi_family];
        if (dominates(lo_family, -1)) summary.worst = curve.families[lo_family];
    }
    return summary;
}

void write_csv(const PowerCurve& curve, std::ostream& out) {
    out << "panel,family,param,rejections,S,rate,se\n";
    for (std::size_t g = 0; g < curve.params.size(); ++g) {
        for (std::size_t f = 0; f < curve.families.size(); ++f) {
            out << csv_quote(curve.panel) << ',' << csv_quote(curve.families[f]) << ','
                << shortest(curve.params[g]) << ',' << curve.rejections[f][g] << ',' << curve.S << ','
                << shortest(curve.rate(f, g)) << ',' << shortest(curve.standard_error(f, g)) << '\n';
        }
    }
}

}  // namespace cwm
