#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wecs/config.hpp"
#include "wecs/drivetrain.hpp"
#include "wecs/plant.hpp"
#include "wecs/scenario.hpp"
#include "wecs/telemetry.hpp"

namespace wecs {

/// Running integrals over a run. Work terms come from the RK4 stages; powers sampled
/// per step are integrated with the trapezoidal rule.
struct EnergyTotals {
    double drive_work = 0.0;       // J, mechanical energy from the drive
    double load_work = 0.0;        // J, mechanical energy taken by the generator (turbine side)
    double aero_energy = 0.0;      // J, integral of p_wt
    double electrical_energy = 0.0;  // J, integral of p_est
    double exported_energy = 0.0;    // J, integral of p_exported
};

struct SimState {
    long long step = 0;
    double t = 0.0;
    ShaftState shaft;
    DrivePlant drive;
    ConverterState converter;
    PiState pi;
    TelemetrySample last_sample;
    EnergyTotals energy;
    int trip_count = 0;
    long long violation_steps = 0;
};

/// The bench executive for one scenario.
///
/// Owns all mutable state. Each call to step() advances exactly one dt in a fixed
/// order: wind, torque reference, drive response, generator load, shaft dynamics,
/// electrical side and protections, telemetry. The command methods must be called
/// between steps; they take effect on the next step.
class Bench {
public:
    /// Throws ConfigError when config or scenario is invalid.
    Bench(BenchConfig config, Scenario scenario);

    /// Throws SimulationError naming the step index when a sub-model fails.
    const TelemetrySample& step();

    [[nodiscard]] const SimState& state() const noexcept { return state_; }
    [[nodiscard]] const Scenario& scenario() const noexcept { return scenario_; }
    [[nodiscard]] const BenchConfig& config() const noexcept { return config_; }
    [[nodiscard]] const TelemetrySample& last_sample() const noexcept { return state_.last_sample; }

    /// Turbine-side load torque the generator applies at omega (MPPT law, zero when disconnected).
    [[nodiscard]] double generator_load_torque(double omega) const;

    void set_wind(double v);
    /// Half-cosine gust on top of the current wind, starting now.
    void inject_gust(double amplitude, double duration);
    /// Throws ConfigError when the setpoint does not match the mode.
    void set_mode(OperatingMode mode, std::optional<double> setpoint);
    /// Throws ConfigError in turbine-emulation mode.
    void set_setpoint(double value);
    /// Operator-initiated trip; latches like a protection trip.
    void trip();
    /// Returns false (and does nothing) when no trip is latched.
    bool reset_trip();
    /// Adds `volts` to the DC bus voltage measured at the end of the next step.
    void inject_dc_spike(double volts);

private:
    TelemetrySample make_sample(double t_ref, double t_applied);
    void latch_trip();
    void apply_due_events();

    BenchConfig config_;
    Scenario scenario_;
    SimState state_;
    double mppt_gain_ = 0.0;
    double pending_spike_ = 0.0;
    std::size_t next_event_ = 0;
};

struct RunSummary {
    std::string scenario;
    long long steps = 0;
    double duration = 0.0;
    double dt = 0.0;
    TelemetrySample final_sample;
    EnergyTotals energy;
    double kinetic_energy_change = 0.0;
    /// electrical_energy / drive_work; 0 when no work was done.
    double mean_efficiency = 0.0;
    /// |E_drive - (E_elec / (eta_conv * eta_gb) + dKE)| / E_drive.
    double conservation_error = 0.0;
    int trip_count = 0;
    long long violation_steps = 0;
};

[[nodiscard]] nlohmann::json to_json(const RunSummary& summary);

struct RunResult {
    std::vector<TelemetrySample> samples;  // initial sample plus one per step
    RunSummary summary;
};

/// Runs duration/dt steps. Deterministic: identical inputs give bit-identical samples.
/// `on_sample`, when set, sees every sample as it is produced.
[[nodiscard]] RunResult run_scenario(const Scenario& scenario, const BenchConfig& config,
                                     const std::function<void(const TelemetrySample&)>& on_sample = {});

/// Header plus one row per sample, newline terminated.
[[nodiscard]] std::string telemetry_csv(const std::vector<TelemetrySample>& samples);

}  // namespace wecs
