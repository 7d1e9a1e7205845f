#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "wecs/error.hpp"
#include "wecs/scenario.hpp"
#include "wecs/turbine.hpp"

using namespace wecs;

TEST(WindProfile, ConstantAndStep) {
    EXPECT_EQ(wind_at(17.0, ConstantWind{8.0}), 8.0);
    const StepWind step{4.0, 12.0, 30.0};
    EXPECT_EQ(wind_at(29.999, step), 4.0);
    EXPECT_EQ(wind_at(30.0, step), 12.0);
    EXPECT_EQ(wind_at(31.0, step), 12.0);
}

TEST(WindProfile, RampInterpolates) {
    const RampWind r{4.0, 8.0, 10.0, 20.0};
    EXPECT_EQ(wind_at(5.0, r), 4.0);
    EXPECT_NEAR(wind_at(15.0, r), 6.0, 1e-12);
    EXPECT_EQ(wind_at(25.0, r), 8.0);
}

TEST(WindProfile, GustPeaksMidWindow) {
    const GustWind g{8.0, 4.0, 10.0, 6.0};
    EXPECT_NEAR(wind_at(13.0, g), 12.0, 1e-12);
    EXPECT_NEAR(wind_at(10.0, g), 8.0, 1e-12);
    EXPECT_NEAR(wind_at(16.0, g), 8.0, 1e-12);
    EXPECT_EQ(wind_at(20.0, g), 8.0);
}

TEST(WindProfile, NegativeTimeThrows) {
    EXPECT_THROW((void)wind_at(-1.0, ConstantWind{8.0}), DomainError);
}

TEST(WindProfile, ValidationRejectsNegativeSpeeds) {
    EXPECT_THROW(validate(WindProfile{ConstantWind{-1.0}}), ConfigError);
    EXPECT_THROW(validate(WindProfile{RampWind{4.0, 8.0, 10.0, 5.0}}), ConfigError);
    EXPECT_NO_THROW(validate(WindProfile{ConstantWind{0.0}}));
}

TEST(TurbulentWind, SameSeedSameSeries) {
    const TurbulentWind a(8.0, 0.15, 42), b(8.0, 0.15, 42), c(8.0, 0.15, 43);
    bool differs = false;
    for (double t = 0.0; t < 60.0; t += 0.037) {
        EXPECT_EQ(a.at(t), b.at(t));
        differs = differs || a.at(t) != c.at(t);
    }
    EXPECT_TRUE(differs);
}

TEST(TurbulentWind, IndependentOfQueryOrder) {
    const TurbulentWind forward(8.0, 0.15, 7), backward(8.0, 0.15, 7);
    std::vector<double> f, b;
    for (int i = 0; i <= 500; ++i) f.push_back(forward.at(0.1 * i));
    for (int i = 500; i >= 0; --i) b.push_back(backward.at(0.1 * i));
    for (int i = 0; i <= 500; ++i) EXPECT_EQ(f[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(500 - i)]);
}

TEST(TurbulentWind, StatisticsMatchIntensity) {
    const TurbulentWind w(8.0, 0.15, 3, 10.0, 0.1);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = w.at(0.1 * i);
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 8.0, 0.1);
    EXPECT_NEAR(sd, 1.2, 0.15);
}

TEST(TurbulentWind, NeverNegative) {
    const TurbulentWind w(1.0, 2.0, 9);
    for (double t = 0.0; t < 500.0; t += 0.05) ASSERT_GE(w.at(t), 0.0);
}

TEST(TorqueReference, EmulationFollowsTurbineTorque) {
    const TurbineParams tp;
    const ControlParams cp;
    PiState pi;
    EXPECT_NEAR(torque_reference(OperatingMode::TurbineEmulation, 9.57, 8.0, std::nullopt, tp, cp, pi, 1e-3),
                aerodynamic_torque(8.0, 9.57, tp), 1e-12);
    EXPECT_EQ(torque_reference(OperatingMode::TurbineEmulation, 0.0, 8.0, std::nullopt, tp, cp, pi, 1e-3),
              cp.breakaway_torque);
    EXPECT_EQ(torque_reference(OperatingMode::TurbineEmulation, 0.0, 0.0, std::nullopt, tp, cp, pi, 1e-3), 0.0);
}

TEST(TorqueReference, TorqueControlSaturates) {
    const TurbineParams tp;
    const ControlParams cp;
    PiState pi;
    EXPECT_EQ(torque_reference(OperatingMode::TorqueControl, 5.0, 8.0, 60.0, tp, cp, pi, 1e-3), 60.0);
    EXPECT_EQ(torque_reference(OperatingMode::TorqueControl, 5.0, 8.0, 1e4, tp, cp, pi, 1e-3), cp.torque_limit);
}

TEST(TorqueReference, MissingSetpointThrows) {
    PiState pi;
    EXPECT_THROW((void)torque_reference(OperatingMode::SpeedControl, 5.0, 8.0, std::nullopt, TurbineParams{},
                                        ControlParams{}, pi, 1e-3),
                 ConfigError);
    EXPECT_THROW((void)torque_reference(OperatingMode::TorqueControl, 5.0, 8.0, std::nullopt, TurbineParams{},
                                        ControlParams{}, pi, 1e-3),
                 ConfigError);
}

TEST(TorqueReference, SpeedLoopReachesSetpoint) {
    // PI against a shaft with J = 0.1 and viscous load 2 N m s/rad
    const TurbineParams tp;
    const ControlParams cp;
    PiState pi;
    double w = 0.0;
    const double dt = 1e-3;
    for (int k = 0; k < 20000; ++k) {
        const double t = torque_reference(OperatingMode::SpeedControl, w, 8.0, 6.0, tp, cp, pi, dt);
        w += dt * (t - 2.0 * w) / 0.1;
    }
    EXPECT_NEAR(w, 6.0, 1e-6);
}

TEST(TorqueReference, AntiWindupLimitsIntegral) {
    const TurbineParams tp;
    const ControlParams cp;
    PiState pi;
    // unreachable setpoint with the shaft held still
    for (int k = 0; k < 100000; ++k)
        (void)torque_reference(OperatingMode::SpeedControl, 0.0, 8.0, 1000.0, tp, cp, pi, 1e-3);
    EXPECT_LT(std::abs(pi.integral), 10.0 * cp.torque_limit);
}

TEST(ScenarioValidation, SetpointMatchesMode) {
    Scenario s;
    s.name = "x";
    EXPECT_NO_THROW(s.validate());
    s.setpoint = 5.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s.mode = OperatingMode::SpeedControl;
    EXPECT_NO_THROW(s.validate());
    s.setpoint.reset();
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(ScenarioValidation, RejectsBadTiming) {
    Scenario s;
    s.name = "x";
    s.dt = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s.dt = 1e-3;
    s.duration = -1.0;
    EXPECT_THROW(s.validate(), ConfigError);
}
