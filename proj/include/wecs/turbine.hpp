#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace wecs {

inline constexpr double kRadPerSecToRpm = 60.0 / (2.0 * std::numbers::pi);

[[nodiscard]] constexpr double rad_per_sec_to_rpm(double omega) noexcept { return omega * kRadPerSecToRpm; }
[[nodiscard]] constexpr double rpm_to_rad_per_sec(double rpm) noexcept { return rpm / kRadPerSecToRpm; }

/// Fixed-pitch rotor description.
///
/// Cp(lambda) = a*lambda + b*lambda^2 - c*lambda^3.5, clamped to zero where the
/// polynomial is negative and for lambda >= lambda_cutoff. The defaults give
/// lambda* ~= 2.9914 and Cp* ~= 0.17023. Rotor radius and air density are
/// back-derived from the published MPP table rather than measured.
struct TurbineParams {
    double rotor_radius = 2.5;   // m
    double air_density = 1.225;  // kg/m^3
    double cp_a = 0.00888;
    double cp_b = 0.03944;
    double cp_c = 0.00452;
    double lambda_cutoff = 6.0;
    double omega_min = 0.1;  // rad/s

    /// Swept area pi*R^2; derived, never stored.
    [[nodiscard]] double swept_area() const noexcept {
        return std::numbers::pi * rotor_radius * rotor_radius;
    }

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;
};

struct OperatingPoint {
    double wind_speed = 0.0;  // m/s
    double omega = 0.0;       // rad/s
    double tsr = 0.0;
    double power = 0.0;   // W
    double torque = 0.0;  // N*m
    double rpm = 0.0;
};

/// Throws DomainError for lambda < 0.
[[nodiscard]] double power_coefficient(double lambda, const TurbineParams& params);

/// dCp/dlambda; zero wherever Cp is clamped.
[[nodiscard]] double power_coefficient_derivative(double lambda, const TurbineParams& params);

/// omega * R / v. Throws DomainError for v <= 0 or omega < 0.
[[nodiscard]] double tip_speed_ratio(double omega, double wind_speed, const TurbineParams& params);

/// 0.5 * A * rho * Cp(lambda) * v^3; zero for v == 0.
[[nodiscard]] double aerodynamic_power(double wind_speed, double omega, const TurbineParams& params);

/// P / omega. Throws LowSpeedError for omega < omega_min.
[[nodiscard]] double aerodynamic_torque(double wind_speed, double omega, const TurbineParams& params);

/// Full operating point at (v, omega). Below omega_min the torque is evaluated at omega_min.
[[nodiscard]] OperatingPoint operating_point(double wind_speed, double omega, const TurbineParams& params);

/// One row per grid speed. The grid must be non-empty, non-negative and strictly increasing.
[[nodiscard]] std::vector<OperatingPoint> power_curve(double wind_speed, std::span<const double> omega_grid,
                                                      const TurbineParams& params);

}  // namespace wecs
