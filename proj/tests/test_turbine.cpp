#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "wecs/error.hpp"
#include "wecs/turbine.hpp"

using namespace wecs;

TEST(PowerCoefficient, MatchesPolynomialAtOne) {
    EXPECT_NEAR(power_coefficient(1.0, TurbineParams{}), 0.0438, 1e-12);
}

TEST(PowerCoefficient, ZeroAtOriginAndPastCutoff) {
    const TurbineParams p;
    EXPECT_EQ(power_coefficient(0.0, p), 0.0);
    EXPECT_EQ(power_coefficient(p.lambda_cutoff, p), 0.0);
    EXPECT_EQ(power_coefficient(10.0, p), 0.0);
}

TEST(PowerCoefficient, ClampedWherePolynomialIsNegative) {
    // the polynomial changes sign near 4.383
    const TurbineParams p;
    EXPECT_GT(power_coefficient(4.38, p), 0.0);
    EXPECT_EQ(power_coefficient(4.40, p), 0.0);
    EXPECT_EQ(power_coefficient(5.5, p), 0.0);
}

TEST(PowerCoefficient, NegativeTsrThrows) {
    EXPECT_THROW((void)power_coefficient(-0.1, TurbineParams{}), DomainError);
    EXPECT_THROW((void)power_coefficient_derivative(-0.1, TurbineParams{}), DomainError);
}

TEST(PowerCoefficient, AgreesWithOracleOnGrid) {
    const TurbineParams p;
    for (double l = 0.0; l <= 7.0; l += 0.01) EXPECT_NEAR(power_coefficient(l, p), oracle::cp(l), 1e-15) << l;
}

TEST(PowerCoefficient, GridMaximumMatchesFrozenOracle) {
    const auto [l_grid, cp_grid] = oracle::cp_grid_argmax(1e-4);
    EXPECT_NEAR(l_grid, 2.9914, 1e-9);
    EXPECT_NEAR(cp_grid, 0.1702252164, 1e-9);
    EXPECT_NEAR(power_coefficient(l_grid, TurbineParams{}), cp_grid, 1e-15);
}

TEST(PowerCoefficient, SingleInteriorMaximum) {
    // derivative changes sign exactly once on the positive branch
    const TurbineParams p;
    int sign_changes = 0;
    double prev = power_coefficient_derivative(0.01, p);
    for (double l = 0.02; l < 4.38; l += 0.01) {
        const double d = power_coefficient_derivative(l, p);
        if ((prev > 0.0) != (d > 0.0)) ++sign_changes;
        prev = d;
    }
    EXPECT_EQ(sign_changes, 1);
}

TEST(PowerCoefficient, DerivativeMatchesCentralDifference) {
    const TurbineParams p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 4.3);
    for (int i = 0; i < 20; ++i) {
        const double l = dist(rng);
        const double h = 1e-5;
        const double fd = (oracle::cp(l + h) - oracle::cp(l - h)) / (2.0 * h);
        EXPECT_NEAR(power_coefficient_derivative(l, p), fd, 1e-6) << l;
    }
}

TEST(TipSpeedRatio, TableExamples) {
    const TurbineParams p;
    EXPECT_NEAR(tip_speed_ratio(4.79, 4.0, p), 2.99375, 1e-12);
    EXPECT_NEAR(tip_speed_ratio(14.36, 12.0, p), 2.9916666666666667, 1e-12);
}

TEST(TipSpeedRatio, NonPositiveWindThrows) {
    EXPECT_THROW((void)tip_speed_ratio(1.0, 0.0, TurbineParams{}), DomainError);
    EXPECT_THROW((void)tip_speed_ratio(1.0, -1.0, TurbineParams{}), DomainError);
}

TEST(AerodynamicPower, TableExamples) {
    const TurbineParams p;
    EXPECT_NEAR(aerodynamic_power(4.0, 4.79, p), 131.02, 131.02 * 0.005);
    EXPECT_NEAR(aerodynamic_power(12.0, 14.36, p), 3537.56, 3537.56 * 0.005);
    // frozen oracle values
    EXPECT_NEAR(aerodynamic_power(4.0, 4.79, p), 131.0204058960858, 1e-9);
    EXPECT_NEAR(aerodynamic_power(12.0, 14.36, p), 3537.5582680587136, 1e-8);
}

TEST(AerodynamicPower, ZeroInCalmAir) {
    EXPECT_EQ(aerodynamic_power(0.0, 5.0, TurbineParams{}), 0.0);
}

TEST(AerodynamicPower, CubicSimilarity) {
    // P(k v, k w) = k^3 P(v, w) because lambda is unchanged
    const TurbineParams p;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vd(2.0, 14.0), ld(0.5, 4.0), kd(0.3, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double v = vd(rng);
        const double w = ld(rng) * v / p.rotor_radius;
        const double k = kd(rng);
        const double base = aerodynamic_power(v, w, p);
        EXPECT_NEAR(aerodynamic_power(k * v, k * w, p) / (k * k * k * base), 1.0, 1e-9);
    }
}

TEST(AerodynamicTorque, TableExample) {
    EXPECT_NEAR(aerodynamic_torque(8.0, 9.57, TurbineParams{}), 109.526147827, 1e-6);
}

TEST(AerodynamicTorque, BelowSpeedFloorThrows) {
    const TurbineParams p;
    EXPECT_THROW((void)aerodynamic_torque(8.0, 0.0, p), LowSpeedError);
    EXPECT_THROW((void)aerodynamic_torque(8.0, 0.5 * p.omega_min, p), LowSpeedError);
    EXPECT_NO_THROW((void)aerodynamic_torque(8.0, p.omega_min, p));
}

TEST(PowerCurve, ArgmaxIndependentOfDensityAndRadiusScaling) {
    TurbineParams p;
    std::vector<double> grid;
    for (double l = 0.5; l < 5.0; l += 0.001) grid.push_back(l * 8.0 / p.rotor_radius);
    auto argmax_lambda = [&](const TurbineParams& q) {
        const auto pts = power_curve(8.0, grid, q);
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].power > pts[best].power) best = i;
        return pts[best].tsr;
    };
    const double l0 = argmax_lambda(p);
    TurbineParams q = p;
    q.air_density = 0.9;
    EXPECT_NEAR(argmax_lambda(q), l0, 1e-12);
    // a different radius shifts omega but not lambda; rebuild the grid in lambda
    q = p;
    q.rotor_radius = 4.0;
    grid.clear();
    for (double l = 0.5; l < 5.0; l += 0.001) grid.push_back(l * 8.0 / q.rotor_radius);
    EXPECT_NEAR(argmax_lambda(q), l0, 1e-9);
}

TEST(PowerCurve, RejectsBadGrids) {
    const TurbineParams p;
    EXPECT_THROW((void)power_curve(8.0, std::vector<double>{}, p), DomainError);
    EXPECT_THROW((void)power_curve(8.0, std::vector<double>{1.0, 1.0}, p), DomainError);
    EXPECT_THROW((void)power_curve(8.0, std::vector<double>{-1.0, 1.0}, p), DomainError);
}

TEST(PowerCurve, LowSpeedPointsUseFloorTorque) {
    const TurbineParams p;
    const auto pts = power_curve(8.0, std::vector<double>{0.0, 1.0}, p);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].power, 0.0);
    EXPECT_TRUE(std::isfinite(pts[0].torque));
    EXPECT_NEAR(pts[1].torque, pts[1].power / 1.0, 1e-12);
}

TEST(Units, RpmRoundTrip) {
    EXPECT_NEAR(rad_per_sec_to_rpm(4.79), 45.741, 1e-3);
    EXPECT_NEAR(rpm_to_rad_per_sec(rad_per_sec_to_rpm(9.57)), 9.57, 1e-12);
}

TEST(TurbineParams, ValidationRejectsNonPhysicalValues) {
    TurbineParams p;
    p.rotor_radius = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = TurbineParams{};
    p.air_density = -1.0;
    EXPECT_THROW(p.validate(), ConfigError);
}
