#include "cwm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "cwm/error.hpp"
#include "cwm/rng.hpp"
#include "cwm/statistic.hpp"

namespace cwm {

namespace {

using Real = long double;

// One coordinate factor of the weight as a sum of c * u^p terms.
struct Monomial {
    Real coef;
    Real power;
};

std::vector<Monomial> weight_terms(const WeightFamily& family, std::size_t j) {
    switch (family.kind()) {
        case WeightKind::Uniform: return {{1, 0}};
        case WeightKind::Median: return {{1, 1}, {-1, 2}};
        case WeightKind::SymmetricTail: return {{1, 2}, {-1, 1}, {0.25L, 0}};
        case WeightKind::UpperTail: return {{1, 2}};
        case WeightKind::LowerTail: return {{1, 0}, {-2, 1}, {1, 2}};
        case WeightKind::Deheuvels: return {{1, 2 * static_cast<Real>(family.beta()[j])}};
    }
    return {};
}

// int_lo^hi u^k w_j(u) du
Real moment(const std::vector<Monomial>& terms, int k, Real lo, Real hi) {
    Real s = 0;
    for (const auto& t : terms) {
        const Real e = t.power + k + 1;
        s += t.coef * (std::pow(hi, e) - std::pow(lo, e)) / e;
    }
    return s;
}

Real weight_at(const std::vector<Monomial>& terms, Real u) {
    Real s = 0;
    for (const auto& t : terms) s += t.coef * std::pow(u, t.power);
    return s;
}

double exact_piecewise(const PseudoObservations& pseudo, const WeightFamily& family) {
    const std::size_t n = pseudo.n();
    const Real nn = static_cast<Real>(n);

    // Breakpoints per axis: 0 and every distinct rank value (which includes 1).
    std::vector<std::vector<std::uint32_t>> cuts(2);
    for (std::size_t j = 0; j < 2; ++j) {
        auto col = pseudo.column(j);
        cuts[j].assign(col.begin(), col.end());
        cuts[j].push_back(0);
        std::sort(cuts[j].begin(), cuts[j].end());
        cuts[j].erase(std::unique(cuts[j].begin(), cuts[j].end()), cuts[j].end());
    }
    const std::size_t nx = cuts[0].size();
    const std::size_t ny = cuts[1].size();

    // counts[a][b] = #{i : U_i1 <= cut_a, U_i2 <= cut_b}
    std::vector<std::size_t> counts(nx * ny, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = std::lower_bound(cuts[0].begin(), cuts[0].end(), pseudo.rank(i, 0)) - cuts[0].begin();
        const auto b = std::lower_bound(cuts[1].begin(), cuts[1].end(), pseudo.rank(i, 1)) - cuts[1].begin();
        ++counts[a * ny + b];
    }
    for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = 1; b < ny; ++b) counts[a * ny + b] += counts[a * ny + b - 1];
    for (std::size_t a = 1; a < nx; ++a)
        for (std::size_t b = 0; b < ny; ++b) counts[a * ny + b] += counts[(a - 1) * ny + b];

    const auto wx = weight_terms(family, 0);
    const auto wy = weight_terms(family, 1);
    std::vector<Real> ix[3], iy[3];
    for (int k = 0; k < 3; ++k) {
        for (std::size_t a = 0; a + 1 < nx; ++a) {
            ix[k].push_back(moment(wx, k, cuts[0][a] / nn, cuts[0][a + 1] / nn));
        }
        for (std::size_t b = 0; b + 1 < ny; ++b) {
            iy[k].push_back(moment(wy, k, cuts[1][b] / nn, cuts[1][b + 1] / nn));
        }
    }

    Real total = 0;
    for (std::size_t a = 0; a + 1 < nx; ++a) {
        for (std::size_t b = 0; b + 1 < ny; ++b) {
            const Real c = counts[a * ny + b] / nn;
            total += c * c * ix[0][a] * iy[0][b] - 2 * c * ix[1][a] * iy[1][b] + ix[2][a] * iy[2][b];
        }
    }
    return static_cast<double>(nn * total);
}

// Smallest center index a with k/n <= (a + 1/2)/m, or m when none.
std::size_t first_center(std::uint32_t k, std::size_t n, std::size_t m) {
    const long long num = 2LL * k * static_cast<long long>(m) - static_cast<long long>(n);
    const long long den = 2LL * static_cast<long long>(n);
    long long a = num <= 0 ? 0 : (num + den - 1) / den;
    return static_cast<std::size_t>(std::min<long long>(a, static_cast<long long>(m)));
}

double grid_quadrature(const PseudoObservations& pseudo, const WeightFamily& family, std::size_t m) {
    const std::size_t n = pseudo.n();
    const std::size_t d = pseudo.d();
    const Real nn = static_cast<Real>(n);
    const Real h = Real(1) / static_cast<Real>(m);

    std::vector<Real> center(m);
    for (std::size_t a = 0; a < m; ++a) center[a] = (a + Real(0.5)) * h;
    std::vector<std::vector<Real>> w(d, std::vector<Real>(m));
    for (std::size_t j = 0; j < d; ++j) {
        const auto terms = weight_terms(family, j);
        for (std::size_t a = 0; a < m; ++a) w[j][a] = weight_at(terms, center[a]);
    }

    // For d = 3, sweep slices along the last axis keeping a running 2-D count.
    const std::size_t slices = d == 3 ? m : 1;
    std::vector<std::vector<std::size_t>> by_slice(slices);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = d == 3 ? first_center(pseudo.rank(i, 2), n, m) : 0;
        if (s < slices) by_slice[s].push_back(i);
    }
    std::vector<std::size_t> running(m * m, 0);
    std::vector<std::size_t> layer(m * m);
    Real total = 0;
    for (std::size_t s = 0; s < slices; ++s) {
        if (!by_slice[s].empty()) {
            std::fill(layer.begin(), layer.end(), 0);
            for (const auto i : by_slice[s]) {
                const std::size_t a = first_center(pseudo.rank(i, 0), n, m);
                const std::size_t b = first_center(pseudo.rank(i, 1), n, m);
                if (a < m && b < m) ++layer[a * m + b];
            }
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 1; b < m; ++b) layer[a * m + b] += layer[a * m + b - 1];
            for (std::size_t a = 1; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) layer[a * m + b] += layer[(a - 1) * m + b];
            for (std::size_t k = 0; k < m * m; ++k) running[k] += layer[k];
        }
        const Real z = d == 3 ? center[s] : Real(1);
        const Real wz = d == 3 ? w[2][s] : Real(1);
        Real slice_sum = 0;
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                const Real diff = running[a * m + b] / nn - center[a] * center[b] * z;
                slice_sum += diff * diff * w[0][a] * w[1][b];
            }
        }
        total += slice_sum * wz;
    }
    Real volume = h * h;
    if (d == 3) volume *= h;
    return static_cast<double>(nn * total * volume);
}

}  // namespace

double oracle_statistic(const PseudoObservations& pseudo, const WeightFamily& family,
                        const OracleConfig& cfg) {
    if (family.dim() != pseudo.d()) throw DimensionError("weight family dimension does not match data");
    switch (cfg.mode) {
        case OracleMode::ExactPiecewise:
            if (pseudo.d() != 2) throw DimensionError("ExactPiecewise oracle supports d = 2 only");
            return exact_piecewise(pseudo, family);
        case OracleMode::GridQuadrature:
            if (pseudo.d() != 2 && pseudo.d() != 3) {
                throw DimensionError("GridQuadrature oracle supports d in {2, 3}");
            }
            if (cfg.grid_points_per_axis < 16) throw InputError("grid_points_per_axis must be >= 16");
            return grid_quadrature(pseudo, family, cfg.grid_points_per_axis);
    }
    throw InputError("unknown oracle mode");
}

namespace {

PseudoObservations random_tie_free(std::size_t n, std::size_t d, Stream& rng) {
    std::vector<std::uint32_t> ranks(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        auto first = ranks.begin() + static_cast<std::ptrdiff_t>(j * n);
        std::iota(first, first + static_cast<std::ptrdiff_t>(n), 1u);
        std::shuffle(first, first + static_cast<std::ptrdiff_t>(n), rng);
    }
    return PseudoObservations(n, d, std::move(ranks));
}

double closed_form(const PseudoObservations& pseudo, const WeightFamily& family, bool fault) {
    double value = compute_statistic(pseudo, family).value;
    if (fault) {
        // Same closed form with every mu2 scaled by (1 + 1e-3).
        double mu2_sum = 0.0;
        for (std::size_t i = 0; i < pseudo.n(); ++i) mu2_sum += family.mu2(pseudo.point(i));
        value -= 2.0 * 1e-3 * mu2_sum;
    }
    return value;
}

double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-10);
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
    if (options.cases < 1) throw InputError("validation needs at least one case");
    if (options.max_n < 2) throw InputError("validation needs max_n >= 2");
    ValidationReport report;
    auto families = standard_families(2);
    families.push_back(WeightFamily::deheuvels({0.5, 1.5}));
    report.families.resize(families.size());
    for (std::size_t f = 0; f < families.size(); ++f) report.families[f].family = families[f].name();

    const auto record = [&](std::size_t f, double value, double reference, const std::string& label) {
        auto& fv = report.families[f];
        const double err = relative_error(value, reference);
        ++fv.cases;
        fv.max_relative_error = std::max(fv.max_relative_error, err);
        if (!(err <= options.tolerance)) {
            fv.passed = false;
            std::ostringstream msg;
            msg.precision(17);
            msg << families[f].name() << " " << label << ": closed form " << value << " vs "
                << reference << " (relative error " << err << ")";
            report.failures.push_back(msg.str());
        }
    };

    // n = 1: the single pseudo-observation is (1, 1), so both mu terms vanish.
    const PseudoObservations single(1, 2, {1, 1});
    for (std::size_t f = 0; f < families.size(); ++f) {
        record(f, closed_form(single, families[f], options.inject_mu2_fault), families[f].mu3(),
               "n=1 vs mu3");
    }
    // Two comonotone points (1/2, 1/2), (1, 1) under uniform weight.
    const PseudoObservations pair(2, 2, {1, 2, 1, 2});
    record(0, closed_form(pair, families[0], options.inject_mu2_fault), 19.0 / 288.0,
           "comonotone n=2 vs 19/288");

    Stream rng(options.seed, 0);
    std::uniform_int_distribution<std::size_t> size_dist(2, options.max_n);
    for (std::size_t c = 0; c < options.cases; ++c) {
        const std::size_t n = size_dist(rng);
        const auto pseudo = random_tie_free(n, 2, rng);
        for (std::size_t f = 0; f < families.size(); ++f) {
            const double reference = oracle_statistic(pseudo, families[f]);
            record(f, closed_form(pseudo, families[f], options.inject_mu2_fault), reference,
                   "case " + std::to_string(c) + " (n=" + std::to_string(n) + ")");
        }
    }
    return report;
}

}  // namespace cwm
