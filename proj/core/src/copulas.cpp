#include "cwm/copulas.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "cwm/csv.hpp"
#include "cwm/error.hpp"

namespace cwm {

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double student_cdf(double k, double x) {
    const boost::math::students_t_distribution<double> dist(k);
    // Evaluate the far tail through the complement to keep relative accuracy.
    return x > 0 ? 1.0 - boost::math::cdf(boost::math::complement(dist, x)) : boost::math::cdf(dist, x);
}

std::vector<std::string> split_params(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(',', start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Lower-triangular Cholesky factor of the equicorrelation matrix.
std::vector<double> equicorrelation_cholesky(double rho, std::size_t d) {
    std::vector<double> L(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = (i == j) ? 1.0 : rho;
            for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            L[i * d + j] = (i == j) ? std::sqrt(s) : s / L[j * d + j];
        }
    }
    return L;
}

// Positive stable variate with Laplace transform exp(-t^a), 0 < a <= 1
// (Kanter's representation of the Chambers-Mallows-Stuck method).
double positive_stable(double a, Stream& rng) {
    if (a == 1.0) return 1.0;
    const double theta = std::numbers::pi * rng.uniform_open();
    const double e = -std::log(rng.uniform_open());
    const double left = std::sin(a * theta) / std::pow(std::sin(theta), 1.0 / a);
    const double right = std::pow(std::sin((1.0 - a) * theta) / e, (1.0 - a) / a);
    return left * right;
}

void check_u(double u1, double u2) {
    if (!(u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0)) {
        throw InputError("copula argument outside [0, 1]^2");
    }
}

}  // namespace

CopulaModel::CopulaModel(CopulaFamily family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}

CopulaModel CopulaModel::independence() { return {CopulaFamily::Independence, 0.0, 0.0}; }

CopulaModel CopulaModel::gaussian(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw InputError("gaussian rho must lie in [0, 1)");
    return {CopulaFamily::Gaussian, rho, 0.0};
}

CopulaModel CopulaModel::student_t(double rho, double k) {
    if (!(rho >= 0.0 && rho < 1.0)) throw InputError("t copula rho must lie in [0, 1)");
    if (!(k > 0.0) || !std::isfinite(k)) throw InputError("t copula degrees of freedom must be > 0");
    return {CopulaFamily::StudentT, rho, k};
}

CopulaModel CopulaModel::gumbel(double alpha) {
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InputError("gumbel alpha must be >= 1");
    return {CopulaFamily::Gumbel, alpha, 0.0};
}

CopulaModel CopulaModel::clayton(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw InputError("clayton theta must be >= 0");
    return {CopulaFamily::Clayton, theta, 0.0};
}

CopulaModel CopulaModel::frank(double gamma) {
    if (!std::isfinite(gamma)) throw InputError("frank gamma must be finite");
    return {CopulaFamily::Frank, gamma, 0.0};
}

CopulaModel CopulaModel::parse(std::string_view spec) {
    if (spec == "independence") return independence();
    const auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    if (colon == std::string_view::npos) throw InputError("copula spec '" + std::string(spec) + "' needs parameters");
    const auto params = split_params(spec.substr(colon + 1));
    const auto expect = [&](std::size_t count) {
        if (params.size() != count) {
            throw InputError("copula '" + std::string(head) + "' takes " + std::to_string(count) + " parameter(s)");
        }
    };
    if (head == "gaussian") {
        expect(1);
        return gaussian(parse_real(params[0]));
    }
    if (head == "t") {
        expect(2);
        return student_t(parse_real(params[0]), parse_real(params[1]));
    }
    if (head == "gumbel") {
        expect(1);
        return gumbel(parse_real(params[0]));
    }
    if (head == "clayton") {
        expect(1);
        return clayton(parse_real(params[0]));
    }
    if (head == "frank") {
        expect(1);
        return frank(parse_real(params[0]));
    }
    throw InputError("unknown copula family '" + std::string(head) + "'");
}

std::string CopulaModel::name() const {
    switch (family_) {
        case CopulaFamily::Independence: return "independence";
        case CopulaFamily::Gaussian: return "gaussian:" + shortest(p1_);
        case CopulaFamily::StudentT: return "t:" + shortest(p1_) + "," + shortest(p2_);
        case CopulaFamily::Gumbel: return "gumbel:" + shortest(p1_);
        case CopulaFamily::Clayton: return "clayton:" + shortest(p1_);
        case CopulaFamily::Frank: return "frank:" + shortest(p1_);
    }
    return "?";
}

bool CopulaModel::is_independence() const noexcept {
    switch (family_) {
        case CopulaFamily::Independence: return true;
        case CopulaFamily::Gaussian: return p1_ == 0.0;
        case CopulaFamily::StudentT: return false;
        case CopulaFamily::Gumbel: return p1_ == 1.0;
        case CopulaFamily::Clayton: return p1_ == 0.0;
        case CopulaFamily::Frank: return p1_ == 0.0;
    }
    return false;
}

Sample sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed, std::size_t d) {
    Stream rng(seed, 0);
    return sample_copula(model, n, rng, d);
}

Sample sample_copula(const CopulaModel& model, std::size_t n, Stream& rng, std::size_t d) {
    if (n < 1) throw InputError("sample size must be >= 1");
    if (d < 2) throw DimensionError("copula samples need d >= 2");
    const auto family = model.family();
    const bool elliptical = family == CopulaFamily::Gaussian || family == CopulaFamily::StudentT;
    if (!elliptical && family != CopulaFamily::Independence && d != 2) {
        throw DimensionError("gumbel, clayton and frank samplers are bivariate");
    }
    std::vector<double> u(n * d);

    if (family == CopulaFamily::Independence || (family != CopulaFamily::StudentT && model.is_independence())) {
        for (auto& x : u) x = rng.uniform_open();
        return Sample(n, d, std::move(u));
    }

    switch (family) {
        case CopulaFamily::Gaussian:
        case CopulaFamily::StudentT: {
            const auto L = equicorrelation_cholesky(model.parameter(), d);
            std::normal_distribution<double> normal;
            std::vector<double> z(d), x(d);
            const double k = model.degrees_of_freedom();
            std::chi_squared_distribution<double> chi2(elliptical && family == CopulaFamily::StudentT ? k : 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (auto& zj : z) zj = normal(rng);
                double scale = 1.0;
                if (family == CopulaFamily::StudentT) scale = 1.0 / std::sqrt(chi2(rng) / k);
                for (std::size_t r = 0; r < d; ++r) {
                    double s = 0.0;
                    for (std::size_t c = 0; c <= r; ++c) s += L[r * d + c] * z[c];
                    x[r] = s * scale;
                }
                for (std::size_t r = 0; r < d; ++r) {
                    u[i * d + r] = family == CopulaFamily::Gaussian ? std_normal_cdf(x[r]) : student_cdf(k, x[r]);
                }
            }
            break;
        }
        case CopulaFamily::Gumbel: {
            // Marshall-Olkin: U_j = psi(E_j / S), psi(t) = exp(-t^(1/alpha)).
            const double a = 1.0 / model.parameter();
            for (std::size_t i = 0; i < n; ++i) {
                const double s = positive_stable(a, rng);
                for (std::size_t j = 0; j < 2; ++j) {
                    const double e = -std::log(rng.uniform_open());
                    u[i * 2 + j] = std::exp(-std::pow(e / s, a));
                }
            }
            break;
        }
        case CopulaFamily::Clayton: {
            // Marshall-Olkin with gamma(1/theta) frailty: psi(t) = (1 + t)^(-1/theta).
            const double theta = model.parameter();
            std::gamma_distribution<double> frailty(1.0 / theta, 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = frailty(rng);
                for (std::size_t j = 0; j < 2; ++j) {
                    const double e = -std::log(rng.uniform_open());
                    u[i * 2 + j] = std::exp(-std::log1p(e / v) / theta);
                }
            }
            break;
        }
        case CopulaFamily::Frank: {
            // Inverse of the conditional distribution C(v | u).
            const double g = model.parameter();
            const double em1 = std::expm1(-g);
            for (std::size_t i = 0; i < n; ++i) {
                const double u1 = rng.uniform_open();
                const double w = rng.uniform_open();
                const double v = -std::log1p(w * em1 / (w + (1.0 - w) * std::exp(-g * u1))) / g;
                u[i * 2] = u1;
                u[i * 2 + 1] = std::clamp(v, 0.0, 1.0);
            }
            break;
        }
        case CopulaFamily::Independence: break;
    }
    return Sample(n, d, std::move(u));
}

Sample to_normal_margins(const Sample& uniform_sample) {
    std::vector<double> x(uniform_sample.data().begin(), uniform_sample.data().end());
    for (auto& v : x) {
        if (!(v > 0.0 && v < 1.0)) throw InputError("normal margins need entries in (0, 1)");
        v = std_normal_quantile(v);
    }
    return Sample(uniform_sample.n(), uniform_sample.d(), std::move(x));
}

double copula_cdf(const CopulaModel& model, double u1, double u2) {
    check_u(u1, u2);
    if (u1 == 0.0 || u2 == 0.0) return 0.0;
    if (u1 == 1.0) return u2;
    if (u2 == 1.0) return u1;
    if (model.family() != CopulaFamily::StudentT && model.is_independence()) return u1 * u2;

    using boost::math::quadrature::gauss_kronrod;
    switch (model.family()) {
        case CopulaFamily::Gaussian: {
            // C = int_{-inf}^{x1} phi(z) Phi((x2 - rho z) / sqrt(1 - rho^2)) dz
            const double rho = model.parameter();
            const double x1 = std_normal_quantile(u1);
            const double x2 = std_normal_quantile(u2);
            const double sd = std::sqrt(1.0 - rho * rho);
            const boost::math::normal_distribution<double> normal;
            const auto f = [&](double z) {
                return boost::math::pdf(normal, z) * std_normal_cdf((x2 - rho * z) / sd);
            };
            const double lo = -std::numeric_limits<double>::infinity();
            return std::clamp(gauss_kronrod<double, 31>::integrate(f, lo, x1, 15, 1e-12), 0.0, std::min(u1, u2));
        }
        case CopulaFamily::StudentT: {
            // Integrated in s = F(z): the z-form converges poorly for heavy tails (small k).
            // Given T1 = z, T2 is t_{k+1} scaled by sqrt((k + z^2)(1 - rho^2) / (k + 1)) around rho z.
            const double rho = model.parameter();
            const double k = model.degrees_of_freedom();
            const boost::math::students_t_distribution<double> dist(k);
            const double x2 = boost::math::quantile(dist, u2);
            const auto f = [&](double s) {
                if (s <= 0.0) return 0.0;
                if (s >= 1.0) return u2;
                const double z = boost::math::quantile(dist, s);
                const double scale = std::sqrt((k + z * z) * (1.0 - rho * rho) / (k + 1.0));
                return student_cdf(k + 1.0, (x2 - rho * z) / scale);
            };
            return std::clamp(gauss_kronrod<double, 31>::integrate(f, 0.0, u1, 10, 1e-10), 0.0, std::min(u1, u2));
        }
        case CopulaFamily::Gumbel: {
            const double a = model.parameter();
            const double s = std::pow(-std::log(u1), a) + std::pow(-std::log(u2), a);
            return std::exp(-std::pow(s, 1.0 / a));
        }
        case CopulaFamily::Clayton: {
            const double t = model.parameter();
            const double s = std::pow(u1, -t) + std::pow(u2, -t) - 1.0;
            return s <= 0.0 ? 0.0 : std::pow(s, -1.0 / t);
        }
        case CopulaFamily::Frank: {
            const double g = model.parameter();
            const double num = std::expm1(-g * u1) * std::expm1(-g * u2);
            return -std::log1p(num / std::expm1(-g)) / g;
        }
        case CopulaFamily::Independence: break;
    }
    return u1 * u2;
}

TailDependence tail_dependence(const CopulaModel& model) {
    switch (model.family()) {
        case CopulaFamily::Gumbel: return {0.0, 2.0 - std::pow(2.0, 1.0 / model.parameter())};
        case CopulaFamily::Clayton:
            return {model.parameter() > 0.0 ? std::pow(2.0, -1.0 / model.parameter()) : 0.0, 0.0};
        case CopulaFamily::Gaussian:
        case CopulaFamily::Frank:
        case CopulaFamily::Independence: return {0.0, 0.0};
        case CopulaFamily::StudentT: break;
    }
    throw UnsupportedError("tail dependence is not available for the t copula");
}

}  // namespace cwm
