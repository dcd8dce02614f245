#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "cwm/error.hpp"
#include "cwm/weights.hpp"
#include "support.hpp"

using namespace cwm;
using namespace cwm::test_support;

namespace {

std::vector<WeightFamily> all_families_2d() {
    auto fams = standard_families(2);
    fams.push_back(WeightFamily::deheuvels({0.5, 1.5}));
    fams.push_back(WeightFamily::deheuvels({0.25, 0.75}));
    return fams;
}

// Nested adaptive quadrature of the defining integral over [a1,1] x [a2,1],
// with the optional prod(u) factor of mu2. Uses only family.value().
double tail_integral(const WeightFamily& f, double a1, double a2, bool times_u) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double u1) {
        auto g = [&](double u2) {
            const double u[2] = {u1, u2};
            return f.value(u) * (times_u ? u1 * u2 : 1.0);
        };
        return gauss_kronrod<double, 31>::integrate(g, a2, 1.0, 12, 1e-13);
    };
    return gauss_kronrod<double, 31>::integrate(inner, a1, 1.0, 12, 1e-13);
}

}  // namespace

TEST(Weights, PointValues) {
    const double half[2] = {0.5, 0.5};
    const double ones[2] = {1.0, 1.0};
    const double any[2] = {0.13, 0.71};
    EXPECT_EQ(WeightFamily::uniform(2).value(any), 1.0);
    EXPECT_DOUBLE_EQ(WeightFamily::median(2).value(half), 0.0625);
    EXPECT_DOUBLE_EQ(WeightFamily::upper_tail(2).value(ones), 1.0);
    EXPECT_DOUBLE_EQ(WeightFamily::lower_tail(2).value(ones), 0.0);
}

TEST(Weights, TailIntegralValues) {
    const double zero[2] = {0.0, 0.0};
    const double half[2] = {0.5, 0.5};
    const double ones[2] = {1.0, 1.0};
    EXPECT_DOUBLE_EQ(WeightFamily::uniform(2).mu1(zero), 1.0);
    EXPECT_DOUBLE_EQ(WeightFamily::upper_tail(2).mu1(zero), 1.0 / 9.0);
    EXPECT_NEAR(WeightFamily::median(2).mu1(half), 1.0 / 144.0, 1e-15);
    EXPECT_DOUBLE_EQ(WeightFamily::uniform(2).mu2(zero), 0.25);
    EXPECT_DOUBLE_EQ(WeightFamily::lower_tail(2).mu2_factor(0, 0.0), 1.0 / 12.0);
    EXPECT_EQ(WeightFamily::symmetric_tail(2).mu2(ones), 0.0);
}

TEST(Weights, Mu3Constants) {
    EXPECT_DOUBLE_EQ(WeightFamily::uniform(2).mu3(), 1.0 / 9.0);
    EXPECT_DOUBLE_EQ(WeightFamily::median(2).mu3(), 1.0 / 400.0);
    EXPECT_DOUBLE_EQ(WeightFamily::symmetric_tail(2).mu3(), 1.0 / 900.0);
    EXPECT_DOUBLE_EQ(WeightFamily::upper_tail(2).mu3(), 1.0 / 25.0);
    EXPECT_DOUBLE_EQ(WeightFamily::lower_tail(2).mu3(), 1.0 / 900.0);
    EXPECT_DOUBLE_EQ(WeightFamily::deheuvels({0.0, 0.0}).mu3(), 1.0 / 9.0);
    EXPECT_DOUBLE_EQ(WeightFamily::uniform(3).mu3(), 1.0 / 27.0);
}

TEST(Weights, QuadratureConsistency) {
    Stream rng(21);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& f : all_families_2d()) {
        for (int k = 0; k < 50; ++k) {
            const double a[2] = {unif(rng), unif(rng)};
            const double q1 = tail_integral(f, a[0], a[1], false);
            const double q2 = tail_integral(f, a[0], a[1], true);
            EXPECT_LE(relative_error(f.mu1(a), q1), 1e-8) << f.name() << " mu1 at " << a[0] << "," << a[1];
            EXPECT_LE(relative_error(f.mu2(a), q2), 1e-8) << f.name() << " mu2 at " << a[0] << "," << a[1];
        }
    }
}

TEST(Weights, Mu3MatchesQuadrature) {
    using boost::math::quadrature::gauss_kronrod;
    for (const auto& f : all_families_2d()) {
        double m = 1.0;
        for (std::size_t j = 0; j < 2; ++j) {
            m *= gauss_kronrod<double, 31>::integrate(
                [&](double u) { return u * u * f.weight_factor(j, u); }, 0.0, 1.0, 12, 1e-14);
        }
        EXPECT_LE(relative_error(f.mu3(), m), 1e-10) << f.name();
    }
}

TEST(Weights, MonotoneAndVanishingAtOne) {
    Stream rng(22);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double ones[2] = {1.0, 1.0};
    for (const auto& f : all_families_2d()) {
        EXPECT_EQ(f.mu1(ones), 0.0) << f.name();
        EXPECT_EQ(f.mu2(ones), 0.0) << f.name();
        for (int k = 0; k < 200; ++k) {
            double a[2] = {unif(rng), unif(rng)};
            const double m1 = f.mu1(a), m2 = f.mu2(a);
            const std::size_t j = k % 2;
            a[j] = a[j] + (1.0 - a[j]) * unif(rng);
            EXPECT_LE(f.mu1(a), m1 + 1e-16) << f.name();
            EXPECT_LE(f.mu2(a), m2 + 1e-16) << f.name();
        }
    }
}

TEST(Weights, ReductionIdentities) {
    Stream rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t d : {2u, 3u}) {
        const auto uni = WeightFamily::uniform(d);
        const auto up = WeightFamily::upper_tail(d);
        const auto b0 = WeightFamily::deheuvels(std::vector<double>(d, 0.0));
        const auto b1 = WeightFamily::deheuvels(std::vector<double>(d, 1.0));
        EXPECT_LE(relative_error(b0.mu3(), uni.mu3()), 1e-14);
        EXPECT_LE(relative_error(b1.mu3(), up.mu3()), 1e-14);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> a(d);
            for (auto& x : a) x = unif(rng);
            EXPECT_LE(relative_error(b0.mu1(a), uni.mu1(a)), 1e-14);
            EXPECT_LE(relative_error(b0.mu2(a), uni.mu2(a)), 1e-14);
            EXPECT_LE(relative_error(b1.mu1(a), up.mu1(a)), 1e-14);
            EXPECT_LE(relative_error(b1.mu2(a), up.mu2(a)), 1e-14);
            EXPECT_LE(relative_error(b1.value(a), up.value(a)), 1e-14);
        }
    }
}

TEST(Weights, NonNegativeAndBoundedOnGrid) {
    for (const auto& f : all_families_2d()) {
        for (int i = 0; i <= 40; ++i) {
            for (int k = 0; k <= 40; ++k) {
                const double u[2] = {i / 40.0, k / 40.0};
                const double w = f.value(u);
                EXPECT_GE(w, 0.0);
                EXPECT_LE(w, 1.0);
            }
        }
    }
}

TEST(Weights, AndersonDarlingMassDiverges) {
    const double m2 = anderson_darling_truncated_mass(1e-2);
    const double m3 = anderson_darling_truncated_mass(1e-3);
    const double m4 = anderson_darling_truncated_mass(1e-4);
    EXPECT_LT(m2, m3);
    EXPECT_LT(m3, m4);
    // Each separable factor is 2 log((1 - eps) / eps), so the mass grows like log^2.
    const auto exact = [](double e) { return std::pow(2.0 * std::log((1.0 - e) / e), 2); };
    EXPECT_NEAR(m4 / exact(1e-4), 1.0, 1e-6);
}

TEST(Weights, ParseAndNames) {
    for (const char* spec : {"uniform", "median", "tails", "upper", "lower"}) {
        const auto f = WeightFamily::parse(spec, 2);
        EXPECT_EQ(f.name(), spec);
        EXPECT_EQ(WeightFamily::parse(f.name(), 2), f);
    }
    EXPECT_EQ(WeightFamily::parse("deheuvels:0.5", 3), WeightFamily::deheuvels({0.5, 0.5, 0.5}));
    EXPECT_EQ(WeightFamily::parse("deheuvels:0.5,2", 2), WeightFamily::deheuvels({0.5, 2.0}));
    EXPECT_EQ(WeightFamily::parse("upper", 2).symbol(), "P_n");
    EXPECT_EQ(WeightFamily::parse("tails", 2).symbol(), "T_n");
    EXPECT_THROW(WeightFamily::parse("anderson", 2), InputError);
    EXPECT_THROW(WeightFamily::parse("deheuvels:1,2,3", 2), DimensionError);
    EXPECT_THROW(WeightFamily::deheuvels({-0.5, 1.0}), InputError);
    EXPECT_THROW(WeightFamily::deheuvels({0.2}), DimensionError);

    const auto all = parse_families("all", 2);
    ASSERT_EQ(all.size(), 5u);
    EXPECT_EQ(all[3], WeightFamily::upper_tail(2));
    const auto mixed = parse_families("uniform,deheuvels:0.5,1,tails", 2);
    ASSERT_EQ(mixed.size(), 3u);
    EXPECT_EQ(mixed[1], WeightFamily::deheuvels({0.5, 1.0}));
}

TEST(Weights, DimensionMismatch) {
    const double u3[3] = {0.1, 0.2, 0.3};
    EXPECT_THROW((void)WeightFamily::uniform(2).value(u3), DimensionError);
    EXPECT_THROW((void)WeightFamily::median(2).mu1(u3), DimensionError);
    EXPECT_THROW((void)WeightFamily::median(2).mu2(u3), DimensionError);
}
