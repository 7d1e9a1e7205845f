#include "wecs/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wecs/error.hpp"

namespace wecs {

namespace {

void require(bool ok, const char* where, const char* what) {
    if (!ok) throw ConfigError(std::string(where) + ": " + what);
}

}  // namespace

void DrivePlant::validate() const {
    require(std::isfinite(torque_time_constant) && torque_time_constant > 0.0, "drive", "time constant must be > 0");
    require(std::isfinite(command_delay) && command_delay >= 0.0, "drive", "command delay must be >= 0");
    require(std::isfinite(torque_limit) && torque_limit > 0.0, "drive", "torque limit must be > 0");
}

double drive_torque_response(double t_ref, DrivePlant& plant, double dt) {
    if (!(dt > 0.0)) throw DomainError("drive_torque_response: dt must be > 0");
    const double saturated = std::clamp(t_ref, -plant.torque_limit, plant.torque_limit);
    const auto delay_steps = static_cast<std::size_t>(std::llround(plant.command_delay / dt));
    if (plant.pending.size() < delay_steps) {
        plant.pending.insert(plant.pending.begin(), delay_steps - plant.pending.size(), plant.applied_torque);
    }
    plant.pending.push_back(saturated);
    const double effective = plant.pending.front();
    plant.pending.pop_front();

    const double alpha = -std::expm1(-dt / plant.torque_time_constant);
    plant.applied_torque += alpha * (effective - plant.applied_torque);
    if (std::abs(effective - plant.applied_torque) < 1e-12) plant.applied_torque = effective;
    plant.applied_torque = std::clamp(plant.applied_torque, -plant.torque_limit, plant.torque_limit);
    return plant.applied_torque;
}

void GeneratorModel::validate() const {
    require(std::isfinite(conversion_efficiency) && conversion_efficiency > 0.0 && conversion_efficiency <= 1.0,
            "generator", "conversion efficiency must be in (0, 1]");
    require(std::isfinite(rated_power) && rated_power > 0.0, "generator", "rated power must be > 0");
    require(std::isfinite(rated_speed) && rated_speed > 0.0, "generator", "rated speed must be > 0");
}

double generator_electrical_power(double p_mech, const GeneratorModel& model) {
    if (!(p_mech >= 0.0)) throw DomainError("generator_electrical_power: mechanical power must be >= 0");
    return std::min(model.conversion_efficiency * p_mech, model.rated_power);
}

int converter_level_command(double p_target, double rated_power) {
    if (!(rated_power > 0.0)) throw DomainError("converter_level_command: rated power must be > 0");
    const double ratio = std::clamp(p_target / rated_power, 0.0, 1.0);
    return static_cast<int>(std::floor((kConverterLevels - 1) * ratio + 0.5));
}

void DcBusModel::validate() const {
    require(std::isfinite(no_load_voltage) && no_load_voltage >= 0.0, "dc_bus", "no-load voltage must be >= 0");
    require(std::isfinite(volts_per_watt) && volts_per_watt >= 0.0, "dc_bus", "volts_per_watt must be >= 0");
    require(std::isfinite(u_max) && u_max > 0.0, "dc_bus", "u_max must be > 0");
}

double dc_bus_voltage(double p_exported, const DcBusModel& model) {
    return model.no_load_voltage + model.volts_per_watt * p_exported;
}

ConverterState overvoltage_guard(ConverterState state, double u_max) {
    if (state.dc_voltage > u_max) {
        state.trip_latched = true;
        state.connected = false;
    }
    return state;
}

ConverterState reset_trip(ConverterState state) {
    state.trip_latched = false;
    state.connected = true;
    return state;
}

void ProtectionLimits::validate() const {
    require(omega_max > 0.0, "protections", "omega_max must be > 0");
    require(torque_max > 0.0, "protections", "torque_max must be > 0");
    require(power_max > 0.0, "protections", "power_max must be > 0");
}

std::vector<ViolationKind> protection_check(const TelemetrySample& sample, const ProtectionLimits& limits) {
    std::vector<ViolationKind> out;
    if (sample.omega > limits.omega_max) out.push_back(ViolationKind::OverSpeed);
    if (std::abs(sample.t_applied) > limits.torque_max) out.push_back(ViolationKind::OverTorque);
    if (sample.p_est > limits.power_max) out.push_back(ViolationKind::OverPower);
    return out;
}

}  // namespace wecs
