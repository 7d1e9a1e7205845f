#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wecs/common.hpp"
#include "wecs/turbine.hpp"

namespace wecs {

struct ConstantWind {
    double v = 0.0;
};

/// v0 before t_step, v1 from t_step on (inclusive).
struct StepWind {
    double v0 = 0.0;
    double v1 = 0.0;
    double t_step = 0.0;
};

/// v0 until t0, linear to v1 at t1, v1 afterwards.
struct RampWind {
    double v0 = 0.0;
    double v1 = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Half-cosine bump: v_base + A (1 - cos(2 pi (t - t_start) / duration)) / 2 inside the window.
struct GustWind {
    double v_base = 0.0;
    double amplitude = 0.0;
    double t_start = 0.0;
    double duration = 0.0;
};

namespace detail {
struct TurbulenceSeries;
}

/// Seeded mean-reverting (Ornstein-Uhlenbeck) fluctuation around v_base.
///
/// The deviation is sampled on a fixed grid with the exact OU transition and linearly
/// interpolated in between; the stationary standard deviation is intensity * v_base.
/// The series is generated lazily from index 0, so values depend only on the parameters.
/// Copies share the generated series.
class TurbulentWind {
public:
    TurbulentWind(double v_base, double intensity, std::uint64_t seed, double time_constant = 10.0,
                  double sample_dt = 0.1);

    [[nodiscard]] double v_base() const noexcept { return v_base_; }
    [[nodiscard]] double intensity() const noexcept { return intensity_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] double time_constant() const noexcept { return time_constant_; }
    [[nodiscard]] double sample_dt() const noexcept { return sample_dt_; }

    /// Clamped at zero.
    [[nodiscard]] double at(double t) const;

private:
    double v_base_;
    double intensity_;
    std::uint64_t seed_;
    double time_constant_;
    double sample_dt_;
    std::shared_ptr<detail::TurbulenceSeries> series_;
};

using WindProfile = std::variant<ConstantWind, StepWind, RampWind, GustWind, TurbulentWind>;

/// Throws ConfigError on negative speeds or degenerate windows.
void validate(const WindProfile& profile);

/// Wind speed at t >= 0. Throws DomainError for negative t.
[[nodiscard]] double wind_at(double t, const WindProfile& profile);

enum class EventAction { Trip, Reset, DcSpike, SetWind };

/// Operator action injected into a headless run at the first step with t >= at.
struct ScenarioEvent {
    double at = 0.0;  // s
    EventAction action = EventAction::Trip;
    double value = 0.0;  // volts for DcSpike, m/s for SetWind
};

struct Scenario {
    std::string name;
    WindProfile profile = ConstantWind{8.0};
    OperatingMode mode = OperatingMode::TurbineEmulation;
    std::optional<double> setpoint;  // N m (torque control) or rad/s (speed control)
    double duration = 60.0;          // s
    double dt = 1e-3;                // s
    double initial_omega = 0.0;      // rad/s
    std::vector<ScenarioEvent> events;

    /// Throws ConfigError. Setpoint must be present exactly when mode != TurbineEmulation.
    void validate() const;
};

struct ControlParams {
    double kp = 5.0;               // N m s/rad
    double ki = 10.0;              // N m/rad
    double anti_windup_gain = 2.0; // 1/s, back-calculation
    double breakaway_torque = 10.0;  // N m, emulation mode below omega_min
    double torque_limit = 400.0;     // N m

    void validate() const;
};

struct PiState {
    double integral = 0.0;
};

/// Torque reference for the drive.
///
/// TurbineEmulation: T = P / omega from the turbine model (breakaway torque below
/// omega_min, zero in calm air). TorqueControl: saturated setpoint. SpeedControl: discrete
/// PI on (setpoint - omega) with back-calculation anti-windup. Throws ConfigError when a
/// setpoint is needed and missing.
[[nodiscard]] double torque_reference(OperatingMode mode, double measured_omega, double wind_speed,
                                      std::optional<double> setpoint, const TurbineParams& turbine,
                                      const ControlParams& control, PiState& pi, double dt);

}  // namespace wecs
