#pragma once

#include <deque>
#include <vector>

#include "wecs/common.hpp"
#include "wecs/telemetry.hpp"

namespace wecs {

/// Torque-controlled asynchronous drive: pure command delay, saturation, first-order lag.
struct DrivePlant {
    double torque_time_constant = 0.01;  // s
    double command_delay = 0.005;        // s
    double torque_limit = 400.0;         // N m
    double applied_torque = 0.0;         // N m, state

    /// Saturated references not yet applied (oldest first).
    std::deque<double> pending;

    void validate() const;
};

/// Advances the drive by dt and returns the applied torque.
///
/// The lag uses the exact zero-order-hold discretization
/// T += (1 - exp(-dt/tau)) * (ref_delayed - T), so it never overshoots a constant
/// reference at any step size. The delay is rounded to a whole number of steps.
double drive_torque_response(double t_ref, DrivePlant& plant, double dt);

struct GeneratorModel {
    double conversion_efficiency = 0.8;
    double rated_power = 5000.0;  // W
    double rated_speed = 20.0;    // rad/s, generator side

    void validate() const;
};

/// min(eta_conv * p_mech, rated_power). Throws DomainError for p_mech < 0.
[[nodiscard]] double generator_electrical_power(double p_mech, const GeneratorModel& model);

struct ConverterState {
    double dc_voltage = 0.0;  // V, U*
    int level_code = 0;       // 0..15
    bool connected = true;
    bool trip_latched = false;
};

inline constexpr int kConverterLevels = 16;

/// round-half-up(15 * clamp(p_target / rated_power, 0, 1)).
[[nodiscard]] int converter_level_command(double p_target, double rated_power);

/// DC link voltage as a linear function of exported power.
struct DcBusModel {
    double no_load_voltage = 300.0;  // V
    double volts_per_watt = 0.05;    // V/W
    double u_max = 450.0;            // V, comparator threshold

    void validate() const;
};

[[nodiscard]] double dc_bus_voltage(double p_exported, const DcBusModel& model);

/// Latches a trip and disconnects when U* > u_max. A latched trip is only cleared by reset_trip.
[[nodiscard]] ConverterState overvoltage_guard(ConverterState state, double u_max);

[[nodiscard]] ConverterState reset_trip(ConverterState state);

struct ProtectionLimits {
    double omega_max = 20.0;    // rad/s
    double torque_max = 400.0;  // N m, on the applied drive torque
    double power_max = 5000.0;  // W, on the generator electrical output

    void validate() const;
};

/// Violations in fixed order: over-speed, over-torque, over-power.
[[nodiscard]] std::vector<ViolationKind> protection_check(const TelemetrySample& sample, const ProtectionLimits& limits);

}  // namespace wecs
