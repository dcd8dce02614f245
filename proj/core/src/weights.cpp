#include "cwm/weights.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "cwm/csv.hpp"
#include "cwm/error.hpp"

namespace cwm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool looks_numeric(std::string_view s) {
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

WeightFamily::WeightFamily(WeightKind kind, std::size_t d, std::vector<double> beta)
    : kind_(kind), d_(d), beta_(std::move(beta)) {
    if (d_ < 2) throw DimensionError("weight family needs d >= 2");
}

WeightFamily WeightFamily::uniform(std::size_t d) { return {WeightKind::Uniform, d, {}}; }
WeightFamily WeightFamily::median(std::size_t d) { return {WeightKind::Median, d, {}}; }
WeightFamily WeightFamily::symmetric_tail(std::size_t d) { return {WeightKind::SymmetricTail, d, {}}; }
WeightFamily WeightFamily::upper_tail(std::size_t d) { return {WeightKind::UpperTail, d, {}}; }
WeightFamily WeightFamily::lower_tail(std::size_t d) { return {WeightKind::LowerTail, d, {}}; }

WeightFamily WeightFamily::deheuvels(std::vector<double> beta) {
    for (const double b : beta) {
        // 2b + 1 > 0 keeps mu1 finite.
        if (!std::isfinite(b) || !(2.0 * b + 1.0 > 0.0)) {
            throw InputError("deheuvels exponent " + shortest(b) + " must exceed -1/2");
        }
    }
    const std::size_t d = beta.size();
    return {WeightKind::Deheuvels, d, std::move(beta)};
}

WeightFamily WeightFamily::parse(std::string_view spec, std::size_t d) {
    spec = trim(spec);
    if (spec == "uniform") return uniform(d);
    if (spec == "median") return median(d);
    if (spec == "tails") return symmetric_tail(d);
    if (spec == "upper") return upper_tail(d);
    if (spec == "lower") return lower_tail(d);
    constexpr std::string_view prefix = "deheuvels:";
    if (spec.starts_with(prefix)) {
        std::vector<double> beta;
        for (auto token : split(spec.substr(prefix.size()), ',')) beta.push_back(parse_real(token));
        if (beta.size() == 1 && d > 1) beta.assign(d, beta.front());
        if (beta.size() != d) {
            throw DimensionError("deheuvels needs " + std::to_string(d) + " exponents, got " +
                                 std::to_string(beta.size()));
        }
        return deheuvels(std::move(beta));
    }
    throw InputError("unknown weight family '" + std::string(spec) + "'");
}

std::string WeightFamily::name() const {
    switch (kind_) {
        case WeightKind::Uniform: return "uniform";
        case WeightKind::Median: return "median";
        case WeightKind::SymmetricTail: return "tails";
        case WeightKind::UpperTail: return "upper";
        case WeightKind::LowerTail: return "lower";
        case WeightKind::Deheuvels: break;
    }
    std::string out = "deheuvels:";
    for (std::size_t j = 0; j < beta_.size(); ++j) {
        if (j > 0) out += ',';
        out += shortest(beta_[j]);
    }
    return out;
}

std::string_view WeightFamily::symbol() const noexcept {
    switch (kind_) {
        case WeightKind::Uniform: return "U_n";
        case WeightKind::Median: return "M_n";
        case WeightKind::SymmetricTail: return "T_n";
        case WeightKind::UpperTail: return "P_n";
        case WeightKind::LowerTail: return "L_n";
        case WeightKind::Deheuvels: return "D_n";
    }
    return "?";
}

void WeightFamily::check_dim(std::size_t size) const {
    if (size != d_) {
        throw DimensionError("point has dimension " + std::to_string(size) + ", family has " +
                             std::to_string(d_));
    }
}

double WeightFamily::weight_factor(std::size_t j, double u) const noexcept {
    switch (kind_) {
        case WeightKind::Uniform: return 1.0;
        case WeightKind::Median: return u * (1.0 - u);
        case WeightKind::SymmetricTail: return (u - 0.5) * (u - 0.5);
        case WeightKind::UpperTail: return u * u;
        case WeightKind::LowerTail: return (1.0 - u) * (1.0 - u);
        case WeightKind::Deheuvels: return std::pow(u, 2.0 * beta_[j]);
    }
    return 0.0;
}

// The polynomial factors are written with an explicit (1 - a) root so they keep
// full relative accuracy as a -> 1, where the expanded forms cancel.
double WeightFamily::mu1_factor(std::size_t j, double a) const noexcept {
    const double b = 1.0 - a;
    switch (kind_) {
        case WeightKind::Uniform: return b;
        case WeightKind::Median: return (2.0 * a + 1.0) * b * b / 6.0;
        case WeightKind::SymmetricTail: {
            const double c = a - 0.5;
            return b * (0.25 + 0.5 * c + c * c) / 3.0;
        }
        case WeightKind::UpperTail: return b * (1.0 + a + a * a) / 3.0;
        case WeightKind::LowerTail: return b * b * b / 3.0;
        case WeightKind::Deheuvels: {
            const double p = 2.0 * beta_[j] + 1.0;
            return -std::expm1(p * std::log(a)) / p;
        }
    }
    return 0.0;
}

double WeightFamily::mu2_factor(std::size_t j, double a) const noexcept {
    const double b = 1.0 - a;
    switch (kind_) {
        case WeightKind::Uniform: return b * (1.0 + a) / 2.0;
        case WeightKind::Median: return b * b * (3.0 * a * a + 2.0 * a + 1.0) / 12.0;
        case WeightKind::SymmetricTail:
            return b * (a * a * a / 4.0 - a * a / 12.0 + a / 24.0 + 1.0 / 24.0);
        case WeightKind::UpperTail: return b * (1.0 + a) * (1.0 + a * a) / 4.0;
        case WeightKind::LowerTail: return b * b * b * (4.0 - 3.0 * b) / 12.0;
        case WeightKind::Deheuvels: {
            const double p = 2.0 * beta_[j] + 2.0;
            return -std::expm1(p * std::log(a)) / p;
        }
    }
    return 0.0;
}

double WeightFamily::mu3_factor(std::size_t j) const noexcept {
    switch (kind_) {
        case WeightKind::Uniform: return 1.0 / 3.0;
        case WeightKind::Median: return 1.0 / 20.0;
        case WeightKind::SymmetricTail: return 1.0 / 30.0;
        case WeightKind::UpperTail: return 1.0 / 5.0;
        case WeightKind::LowerTail: return 1.0 / 30.0;
        case WeightKind::Deheuvels: return 1.0 / (2.0 * beta_[j] + 3.0);
    }
    return 0.0;
}

double WeightFamily::value(std::span<const double> u) const {
    check_dim(u.size());
    double w = 1.0;
    for (std::size_t j = 0; j < d_; ++j) w *= weight_factor(j, u[j]);
    return w;
}

double WeightFamily::mu1(std::span<const double> a) const {
    check_dim(a.size());
    double m = 1.0;
    for (std::size_t j = 0; j < d_; ++j) m *= mu1_factor(j, a[j]);
    return m;
}

double WeightFamily::mu2(std::span<const double> a) const {
    check_dim(a.size());
    double m = 1.0;
    for (std::size_t j = 0; j < d_; ++j) m *= mu2_factor(j, a[j]);
    return m;
}

double WeightFamily::mu3() const noexcept {
    double m = 1.0;
    for (std::size_t j = 0; j < d_; ++j) m *= mu3_factor(j);
    return m;
}

std::vector<WeightFamily> standard_families(std::size_t d) {
    return {WeightFamily::uniform(d), WeightFamily::median(d), WeightFamily::symmetric_tail(d),
            WeightFamily::upper_tail(d), WeightFamily::lower_tail(d)};
}

std::vector<WeightFamily> parse_families(std::string_view list, std::size_t d) {
    list = trim(list);
    if (list == "all") return standard_families(d);
    std::vector<std::string> specs;
    for (auto token : split(list, ',')) {
        if (looks_numeric(token) && !specs.empty() && specs.back().starts_with("deheuvels:")) {
            specs.back() += ',';
            specs.back() += token;
        } else {
            specs.emplace_back(token);
        }
    }
    std::vector<WeightFamily> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(WeightFamily::parse(s, d));
    if (out.empty()) throw InputError("empty weight family list");
    return out;
}

double anderson_darling_truncated_mass(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
    using boost::math::quadrature::gauss_kronrod;
    const auto inner = [eps](double u1) {
        const auto f = [u1](double u2) { return 1.0 / (u1 * u2 * (u1 - 1.0) * (u2 - 1.0)); };
        return gauss_kronrod<double, 61>::integrate(f, eps, 1.0 - eps, 15, 1e-12);
    };
    return gauss_kronrod<double, 61>::integrate(inner, eps, 1.0 - eps, 15, 1e-12);
}

}  // namespace cwm
