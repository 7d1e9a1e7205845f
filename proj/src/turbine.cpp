#include "wecs/turbine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wecs/error.hpp"

namespace wecs {

void TurbineParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("turbine: ") + what);
    };
    require(std::isfinite(rotor_radius) && rotor_radius > 0.0, "rotor_radius must be > 0");
    require(std::isfinite(air_density) && air_density > 0.0, "air_density must be > 0");
    require(std::isfinite(cp_a) && cp_a > 0.0, "cp_a must be > 0");
    require(std::isfinite(cp_b) && cp_b > 0.0, "cp_b must be > 0");
    require(std::isfinite(cp_c) && cp_c > 0.0, "cp_c must be > 0");
    require(std::isfinite(lambda_cutoff) && lambda_cutoff > 0.0, "lambda_cutoff must be > 0");
    require(std::isfinite(omega_min) && omega_min > 0.0, "omega_min must be > 0");
}

namespace {

double cp_polynomial(double lambda, const TurbineParams& p) {
    return p.cp_a * lambda + p.cp_b * lambda * lambda - p.cp_c * std::pow(lambda, 3.5);
}

}  // namespace

double power_coefficient(double lambda, const TurbineParams& params) {
    if (!(lambda >= 0.0)) throw DomainError("power_coefficient: lambda must be >= 0");
    if (lambda >= params.lambda_cutoff) return 0.0;
    return std::max(0.0, cp_polynomial(lambda, params));
}

double power_coefficient_derivative(double lambda, const TurbineParams& params) {
    if (!(lambda >= 0.0)) throw DomainError("power_coefficient_derivative: lambda must be >= 0");
    if (lambda >= params.lambda_cutoff || cp_polynomial(lambda, params) < 0.0) return 0.0;
    return params.cp_a + 2.0 * params.cp_b * lambda - 3.5 * params.cp_c * std::pow(lambda, 2.5);
}

double tip_speed_ratio(double omega, double wind_speed, const TurbineParams& params) {
    if (!(wind_speed > 0.0)) throw DomainError("tip_speed_ratio: wind speed must be > 0");
    if (!(omega >= 0.0)) throw DomainError("tip_speed_ratio: omega must be >= 0");
    return omega * params.rotor_radius / wind_speed;
}

double aerodynamic_power(double wind_speed, double omega, const TurbineParams& params) {
    if (!(wind_speed >= 0.0)) throw DomainError("aerodynamic_power: wind speed must be >= 0");
    if (wind_speed == 0.0) return 0.0;
    const double cp = power_coefficient(tip_speed_ratio(omega, wind_speed, params), params);
    return 0.5 * params.swept_area() * params.air_density * cp * wind_speed * wind_speed * wind_speed;
}

double aerodynamic_torque(double wind_speed, double omega, const TurbineParams& params) {
    if (!(omega >= params.omega_min)) {
        throw LowSpeedError("aerodynamic_torque: omega " + std::to_string(omega) + " below omega_min " +
                            std::to_string(params.omega_min));
    }
    return aerodynamic_power(wind_speed, omega, params) / omega;
}

OperatingPoint operating_point(double wind_speed, double omega, const TurbineParams& params) {
    OperatingPoint op;
    op.wind_speed = wind_speed;
    op.omega = omega;
    op.tsr = wind_speed > 0.0 ? tip_speed_ratio(omega, wind_speed, params) : 0.0;
    op.power = aerodynamic_power(wind_speed, omega, params);
    op.torque = aerodynamic_torque(wind_speed, std::max(omega, params.omega_min), params);
    op.rpm = rad_per_sec_to_rpm(omega);
    return op;
}

std::vector<OperatingPoint> power_curve(double wind_speed, std::span<const double> omega_grid,
                                        const TurbineParams& params) {
    if (omega_grid.empty()) throw DomainError("power_curve: empty omega grid");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] >= 0.0)) throw DomainError("power_curve: grid must be non-negative");
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
            throw DomainError("power_curve: grid must be strictly increasing");
    }
    std::vector<OperatingPoint> rows;
    rows.reserve(omega_grid.size());
    for (double omega : omega_grid) rows.push_back(operating_point(wind_speed, omega, params));
    return rows;
}

}  // namespace wecs
