#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cwm/copulas.hpp"
#include "cwm/error.hpp"
#include "support.hpp"

using namespace cwm;
using namespace cwm::test_support;

namespace {

std::vector<CopulaModel> models() {
    return {CopulaModel::independence(), CopulaModel::gaussian(0.0), CopulaModel::gaussian(0.4),
            CopulaModel::gaussian(0.9),  CopulaModel::student_t(0.0, 0.3), CopulaModel::student_t(0.5, 1.0),
            CopulaModel::student_t(0.2, 4.0), CopulaModel::gumbel(1.0), CopulaModel::gumbel(1.3),
            CopulaModel::gumbel(3.0),    CopulaModel::clayton(0.0),  CopulaModel::clayton(0.6),
            CopulaModel::clayton(4.0),   CopulaModel::frank(-4.0),   CopulaModel::frank(0.0),
            CopulaModel::frank(3.0),     CopulaModel::frank(12.0)};
}

double ks_distance(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max({worst, std::abs((i + 1) / n - x[i]), std::abs(i / n - x[i])});
    }
    return worst;
}

std::vector<double> column(const Sample& s, std::size_t j) {
    std::vector<double> c(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) c[i] = s(i, j);
    return c;
}

double spearman(const Sample& s) {
    const auto u = pseudo_observations(s);
    const double n = static_cast<double>(s.n());
    double sum = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        sum += (u.value(i, 0) - 0.5 - 0.5 / n) * (u.value(i, 1) - 0.5 - 0.5 / n);
    }
    return 12.0 * sum / (n * (1.0 - 1.0 / (n * n)));
}

}  // namespace

TEST(Copulas, ParseAndRanges) {
    EXPECT_TRUE(CopulaModel::parse("independence").is_independence());
    EXPECT_EQ(CopulaModel::parse("gaussian:0.4").parameter(), 0.4);
    const auto t = CopulaModel::parse("t:0.0,1.0");
    EXPECT_EQ(t.family(), CopulaFamily::StudentT);
    EXPECT_EQ(t.degrees_of_freedom(), 1.0);
    EXPECT_EQ(CopulaModel::parse("gumbel:1.3").family(), CopulaFamily::Gumbel);
    EXPECT_EQ(CopulaModel::parse("clayton:0.6").parameter(), 0.6);
    EXPECT_EQ(CopulaModel::parse("frank:2.0").parameter(), 2.0);
    EXPECT_EQ(CopulaModel::parse(CopulaModel::student_t(0.25, 3.0).name()).parameter(), 0.25);

    EXPECT_THROW(CopulaModel::parse("gaussian:1.0"), InputError);
    EXPECT_THROW(CopulaModel::parse("gaussian:-0.1"), InputError);
    EXPECT_THROW(CopulaModel::parse("t:0.1,0"), InputError);
    EXPECT_THROW(CopulaModel::parse("gumbel:0.9"), InputError);
    EXPECT_THROW(CopulaModel::parse("clayton:-0.5"), InputError);
    EXPECT_THROW(CopulaModel::parse("frank:nan"), InputError);
    EXPECT_THROW(CopulaModel::parse("joe:2"), InputError);
    EXPECT_THROW(CopulaModel::parse("gaussian"), InputError);
    EXPECT_THROW(CopulaModel::parse("t:0.5"), InputError);

    for (const auto& m : {CopulaModel::gaussian(0.0), CopulaModel::gumbel(1.0), CopulaModel::clayton(0.0),
                          CopulaModel::frank(0.0)}) {
        EXPECT_TRUE(m.is_independence()) << m.name();
    }
    EXPECT_FALSE(CopulaModel::student_t(0.0, 1.0).is_independence());
}

TEST(Copulas, CdfValues) {
    EXPECT_NEAR(copula_cdf(CopulaModel::gumbel(1.0), 0.3, 0.7), 0.21, 1e-15);
    EXPECT_NEAR(copula_cdf(CopulaModel::clayton(2.0), 0.5, 0.5), 1.0 / std::sqrt(7.0), 1e-15);
    EXPECT_NEAR(copula_cdf(CopulaModel::clayton(2.0), 0.05, 0.05), 1.0 / std::sqrt(799.0), 1e-15);
    Stream rng(61);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double u = unif(rng), v = unif(rng);
        EXPECT_NEAR(copula_cdf(CopulaModel::frank(1e-8), u, v), u * v, 1e-6);
        EXPECT_NEAR(copula_cdf(CopulaModel::gaussian(0.0), u, v), u * v, 1e-9);
    }
    // Gaussian orthant probability at the medians: 1/4 + asin(rho) / (2 pi).
    EXPECT_NEAR(copula_cdf(CopulaModel::gaussian(0.6), 0.5, 0.5), 0.25 + std::asin(0.6) / (2 * std::numbers::pi),
                1e-8);
    // Same identity holds for the t copula, for every k.
    EXPECT_NEAR(copula_cdf(CopulaModel::student_t(0.6, 2.5), 0.5, 0.5),
                0.25 + std::asin(0.6) / (2 * std::numbers::pi), 1e-8);
}

TEST(Copulas, CdfBoundaries) {
    for (const auto& m : models()) {
        for (double u : {0.0, 0.2, 0.75, 1.0}) {
            EXPECT_NEAR(copula_cdf(m, u, 0.0), 0.0, 1e-12) << m.name();
            EXPECT_NEAR(copula_cdf(m, 0.0, u), 0.0, 1e-12) << m.name();
            EXPECT_NEAR(copula_cdf(m, u, 1.0), u, 1e-9) << m.name();
            EXPECT_NEAR(copula_cdf(m, 1.0, u), u, 1e-9) << m.name();
        }
    }
    EXPECT_THROW(copula_cdf(CopulaModel::frank(1.0), 1.2, 0.5), InputError);
}

TEST(Copulas, FrechetHoeffdingBounds) {
    Stream rng(62);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& m : models()) {
        for (int k = 0; k < 1000; ++k) {
            const double u = unif(rng), v = unif(rng);
            const double c = copula_cdf(m, u, v);
            ASSERT_GE(c, std::max(u + v - 1.0, 0.0) - 1e-9) << m.name() << " at " << u << "," << v;
            ASSERT_LE(c, std::min(u, v) + 1e-9) << m.name() << " at " << u << "," << v;
        }
    }
}

TEST(Copulas, TwoIncreasing) {
    Stream rng(63);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& m : models()) {
        for (int k = 0; k < 300; ++k) {
            double u1 = unif(rng), u2 = unif(rng), v1 = unif(rng), v2 = unif(rng);
            if (u1 > u2) std::swap(u1, u2);
            if (v1 > v2) std::swap(v1, v2);
            const double vol = copula_cdf(m, u2, v2) - copula_cdf(m, u1, v2) - copula_cdf(m, u2, v1) +
                               copula_cdf(m, u1, v1);
            ASSERT_GE(vol, -1e-9) << m.name();
        }
    }
}

TEST(Copulas, TailDependence) {
    const auto g2 = tail_dependence(CopulaModel::gumbel(2.0));
    EXPECT_NEAR(g2.upper, 2.0 - std::sqrt(2.0), 1e-15);
    EXPECT_EQ(g2.lower, 0.0);
    const auto c1 = tail_dependence(CopulaModel::clayton(1.0));
    EXPECT_NEAR(c1.lower, 0.5, 1e-15);
    EXPECT_EQ(c1.upper, 0.0);
    const auto g1 = tail_dependence(CopulaModel::gumbel(1.0));
    EXPECT_EQ(g1.lower, 0.0);
    EXPECT_EQ(g1.upper, 0.0);
    EXPECT_EQ(tail_dependence(CopulaModel::clayton(0.0)).lower, 0.0);
    EXPECT_EQ(tail_dependence(CopulaModel::gaussian(0.7)).upper, 0.0);
    EXPECT_EQ(tail_dependence(CopulaModel::frank(5.0)).lower, 0.0);
    EXPECT_THROW(tail_dependence(CopulaModel::student_t(0.0, 1.0)), UnsupportedError);
}

TEST(Copulas, SamplesInUnitSquareAndDeterministic) {
    for (const auto& m : models()) {
        const auto a = sample_copula(m, 500, 17);
        const auto b = sample_copula(m, 500, 17);
        EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin())) << m.name();
        for (const double x : a.data()) {
            ASSERT_GT(x, 0.0) << m.name();
            ASSERT_LT(x, 1.0) << m.name();
        }
    }
    EXPECT_THROW(sample_copula(CopulaModel::gumbel(2.0), 10, 1, 3), DimensionError);
    EXPECT_THROW(sample_copula(CopulaModel::frank(2.0), 0, 1), InputError);
    EXPECT_EQ(sample_copula(CopulaModel::gaussian(0.5), 10, 1, 4).d(), 4u);
}

TEST(Copulas, MarginsAreUniform) {
    const std::size_t n = 100000;
    const double bound = 1.63 / std::sqrt(static_cast<double>(n));
    for (const auto& m : models()) {
        const auto s = sample_copula(m, n, 64);
        for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(ks_distance(column(s, j)), bound) << m.name() << " margin " << j;
    }
}

TEST(Copulas, EmpiricalCopulaMatchesCdf) {
    const std::size_t n = 100000;
    for (const auto& m : models()) {
        const auto s = sample_copula(m, n, 65);
        // Count points in each cell of a 20 x 20 grid, then accumulate.
        std::vector<double> count(21 * 21, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<std::size_t>(std::ceil(s(i, 0) * 20.0));
            const auto b = static_cast<std::size_t>(std::ceil(s(i, 1) * 20.0));
            count[a * 21 + b] += 1.0;
        }
        for (std::size_t a = 1; a <= 20; ++a)
            for (std::size_t b = 0; b <= 20; ++b) count[a * 21 + b] += count[(a - 1) * 21 + b];
        for (std::size_t a = 0; a <= 20; ++a)
            for (std::size_t b = 1; b <= 20; ++b) count[a * 21 + b] += count[a * 21 + b - 1];
        double worst = 0.0;
        for (std::size_t a = 1; a <= 20; ++a) {
            for (std::size_t b = 1; b <= 20; ++b) {
                const double emp = count[a * 21 + b] / static_cast<double>(n);
                worst = std::max(worst, std::abs(emp - copula_cdf(m, a / 20.0, b / 20.0)));
            }
        }
        EXPECT_LE(worst, 0.01) << m.name();
    }
}

// C(0.05, 0.05) = (2 * 0.05^-2 - 1)^(-1/2) for Clayton theta = 2.
TEST(Copulas, ClaytonLowerTailFrequency) {
    const std::size_t n = 1000000;
    const auto s = sample_copula(CopulaModel::clayton(2.0), n, 66);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += (s(i, 0) <= 0.05 && s(i, 1) <= 0.05);
    const double p = std::pow(2.0 * std::pow(0.05, -2.0) - 1.0, -0.5);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    EXPECT_NEAR(static_cast<double>(hits) / n, p, 3.0 * sigma);
}

// Gaussian copula rank correlation: (6 / pi) asin(rho / 2).
TEST(Copulas, GaussianSpearmanCorrelation) {
    const auto s = sample_copula(CopulaModel::gaussian(0.8), 100000, 67);
    EXPECT_NEAR(spearman(s), 6.0 / std::numbers::pi * std::asin(0.4), 0.01);
}

TEST(Copulas, IndependenceMembersLookIndependent) {
    for (const auto& m : {CopulaModel::gumbel(1.0), CopulaModel::clayton(0.0), CopulaModel::frank(0.0),
                          CopulaModel::gaussian(0.0), CopulaModel::independence()}) {
        EXPECT_NEAR(spearman(sample_copula(m, 100000, 68)), 0.0, 0.01) << m.name();
    }
}

TEST(Copulas, NormalMargins) {
    const auto s = sample_copula(CopulaModel::gaussian(0.3), 200, 69);
    const auto z = to_normal_margins(s);
    const auto u = pseudo_observations(s);
    const auto v = pseudo_observations(z);
    EXPECT_TRUE(std::equal(u.ranks().begin(), u.ranks().end(), v.ranks().begin()));
    const boost::math::normal_distribution<double> phi;
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(z(i, 1), boost::math::quantile(phi, s(i, 1)), 1e-12);
}
