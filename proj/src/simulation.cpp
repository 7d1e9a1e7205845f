#include "wecs/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "wecs/error.hpp"
#include "wecs/mppt.hpp"

namespace wecs {

Bench::Bench(BenchConfig config, Scenario scenario) : config_(std::move(config)), scenario_(std::move(scenario)) {
    config_.validate();
    scenario_.validate();
    std::stable_sort(scenario_.events.begin(), scenario_.events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.at < b.at; });
    mppt_gain_ = mppt_power_gain(config_.turbine);
    state_.shaft.omega = scenario_.initial_omega;
    state_.drive.torque_time_constant = config_.drive.torque_time_constant;
    state_.drive.command_delay = config_.drive.command_delay;
    state_.drive.torque_limit = config_.drive.torque_limit;
    try {
        state_.last_sample = make_sample(0.0, 0.0);
    } catch (const Error& e) {
        throw SimulationError(0, e.what());
    }
}

double Bench::generator_load_torque(double omega) const {
    if (!state_.converter.connected) return 0.0;
    double torque = mppt_gain_ * omega * std::abs(omega);
    // Hold the electrical output at rated power.
    const double chain_eff = config_.generator.conversion_efficiency * config_.drivetrain.gearbox_efficiency;
    if (omega > 0.0) torque = std::min(torque, config_.generator.rated_power / (chain_eff * omega));
    return torque;
}

void Bench::latch_trip() {
    if (!state_.converter.trip_latched) ++state_.trip_count;
    state_.converter.trip_latched = true;
    state_.converter.connected = false;
}

TelemetrySample Bench::make_sample(double t_ref, double t_applied) {
    const TurbineParams& turbine = config_.turbine;
    TelemetrySample s;
    s.step = state_.step;
    s.t = state_.t;
    s.v = wind_at(state_.t, scenario_.profile);
    s.omega = state_.shaft.omega;
    s.n = rad_per_sec_to_rpm(s.omega);
    s.lambda = s.v > 0.0 ? tip_speed_ratio(s.omega, s.v, turbine) : 0.0;
    s.t_ref = t_ref;
    s.t_applied = t_applied;
    s.p_wt = aerodynamic_power(s.v, s.omega, turbine);

    const GeneratorSide gen = reflect_to_generator(s.omega, generator_load_torque(s.omega), config_.drivetrain);
    s.p_est = generator_electrical_power(std::max(0.0, gen.omega * gen.torque), config_.generator);
    double exported = state_.converter.connected ? s.p_est : 0.0;

    ConverterState& conv = state_.converter;
    conv.dc_voltage = dc_bus_voltage(exported, config_.dc_bus) + pending_spike_;
    pending_spike_ = 0.0;
    const bool was_tripped = conv.trip_latched;
    conv = overvoltage_guard(conv, config_.dc_bus.u_max);
    if (conv.trip_latched && !was_tripped) ++state_.trip_count;

    s.mode = scenario_.mode;
    s.violations = protection_check(s, config_.protections);
    if (!s.violations.empty()) {
        ++state_.violation_steps;
        latch_trip();
    }
    if (conv.trip_latched) exported = 0.0;
    conv.level_code = converter_level_command(exported, config_.generator.rated_power);

    s.p_exported = exported;
    s.u_star = conv.dc_voltage;
    s.level_code = conv.level_code;
    s.trip_latched = conv.trip_latched;
    return s;
}

void Bench::apply_due_events() {
    constexpr double kEps = 1e-12;
    while (next_event_ < scenario_.events.size() && scenario_.events[next_event_].at <= state_.t + kEps) {
        const ScenarioEvent& ev = scenario_.events[next_event_++];
        switch (ev.action) {
            case EventAction::Trip: trip(); break;
            case EventAction::Reset: reset_trip(); break;
            case EventAction::DcSpike: inject_dc_spike(ev.value); break;
            case EventAction::SetWind: set_wind(ev.value); break;
        }
    }
}

const TelemetrySample& Bench::step() {
    const long long index = state_.step + 1;
    try {
        apply_due_events();
        const double dt = scenario_.dt;
        const double v = wind_at(state_.t, scenario_.profile);
        const double t_ref = torque_reference(scenario_.mode, state_.shaft.omega, v, scenario_.setpoint,
                                              config_.turbine, config_.control, state_.pi, dt);
        const double t_applied = drive_torque_response(t_ref, state_.drive, dt);

        EnergyTally tally;
        state_.shaft = step_dynamics(
            state_.shaft, t_applied, [this](double omega) { return generator_load_torque(omega); },
            config_.drivetrain, dt, &tally);
        state_.step = index;
        state_.t = static_cast<double>(index) * dt;
        state_.shaft.t = state_.t;

        const TelemetrySample prev = state_.last_sample;
        state_.last_sample = make_sample(t_ref, t_applied);
        const TelemetrySample& cur = state_.last_sample;

        EnergyTotals& e = state_.energy;
        e.drive_work += tally.drive_work;
        e.load_work += tally.load_work;
        e.aero_energy += 0.5 * dt * (prev.p_wt + cur.p_wt);
        e.electrical_energy += 0.5 * dt * (prev.p_est + cur.p_est);
        e.exported_energy += 0.5 * dt * (prev.p_exported + cur.p_exported);
    } catch (const SimulationError&) {
        throw;
    } catch (const Error& e) {
        throw SimulationError(index, e.what());
    }
    return state_.last_sample;
}

void Bench::set_wind(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("set_wind: wind speed must be >= 0");
    scenario_.profile = ConstantWind{v};
}

void Bench::inject_gust(double amplitude, double duration) {
    const GustWind gust{wind_at(state_.t, scenario_.profile), amplitude, state_.t, duration};
    WindProfile profile = gust;
    validate(profile);
    scenario_.profile = profile;
}

void Bench::set_mode(OperatingMode mode, std::optional<double> setpoint) {
    Scenario next = scenario_;
    next.mode = mode;
    next.setpoint = setpoint;
    next.validate();
    if (mode == OperatingMode::SpeedControl && scenario_.mode != OperatingMode::SpeedControl) {
        // Bumpless transfer: the integrator starts from the torque currently requested.
        state_.pi.integral = state_.last_sample.t_ref;
    }
    scenario_.mode = mode;
    scenario_.setpoint = setpoint;
}

void Bench::set_setpoint(double value) {
    if (scenario_.mode == OperatingMode::TurbineEmulation)
        throw ConfigError("set_setpoint: turbine emulation mode takes no setpoint");
    if (!std::isfinite(value)) throw ConfigError("set_setpoint: setpoint must be finite");
    scenario_.setpoint = value;
}

void Bench::trip() { latch_trip(); }

bool Bench::reset_trip() {
    if (!state_.converter.trip_latched) return false;
    state_.converter = wecs::reset_trip(state_.converter);
    return true;
}

void Bench::inject_dc_spike(double volts) {
    if (!std::isfinite(volts)) throw ConfigError("inject_dc_spike: voltage must be finite");
    pending_spike_ += volts;
}

nlohmann::json to_json(const RunSummary& s) {
    return {
        {"scenario", s.scenario},
        {"steps", s.steps},
        {"duration_s", s.duration},
        {"dt_s", s.dt},
        {"final", to_json(s.final_sample)},
        {"energy_j",
         {{"drive_work", s.energy.drive_work},
          {"generator_mechanical", s.energy.load_work},
          {"aerodynamic", s.energy.aero_energy},
          {"electrical", s.energy.electrical_energy},
          {"exported", s.energy.exported_energy},
          {"kinetic_change", s.kinetic_energy_change}}},
        {"mean_efficiency", s.mean_efficiency},
        {"conservation_error", s.conservation_error},
        {"trip_count", s.trip_count},
        {"violation_steps", s.violation_steps},
    };
}

RunResult run_scenario(const Scenario& scenario, const BenchConfig& config,
                       const std::function<void(const TelemetrySample&)>& on_sample) {
    Bench bench(config, scenario);
    RunResult result;
    const long long steps = std::llround(scenario.duration / scenario.dt);
    result.samples.reserve(static_cast<std::size_t>(steps) + 1);
    result.samples.push_back(bench.last_sample());
    if (on_sample) on_sample(result.samples.back());
    const double omega0 = bench.state().shaft.omega;
    for (long long k = 0; k < steps; ++k) {
        result.samples.push_back(bench.step());
        if (on_sample) on_sample(result.samples.back());
    }

    const SimState& st = bench.state();
    RunSummary& sum = result.summary;
    sum.scenario = scenario.name;
    sum.steps = steps;
    sum.duration = st.t;
    sum.dt = scenario.dt;
    sum.final_sample = st.last_sample;
    sum.energy = st.energy;
    const double inertia = total_inertia(config.drivetrain);
    sum.kinetic_energy_change = 0.5 * inertia * (st.shaft.omega * st.shaft.omega - omega0 * omega0);
    sum.trip_count = st.trip_count;
    sum.violation_steps = st.violation_steps;
    if (st.energy.drive_work > 0.0) {
        sum.mean_efficiency = st.energy.electrical_energy / st.energy.drive_work;
        const double chain = config.generator.conversion_efficiency * config.drivetrain.gearbox_efficiency;
        const double balance = st.energy.electrical_energy / chain + sum.kinetic_energy_change;
        sum.conservation_error = std::abs(st.energy.drive_work - balance) / st.energy.drive_work;
    }
    return result;
}

std::string telemetry_csv(const std::vector<TelemetrySample>& samples) {
    std::string out = telemetry_csv_header();
    out += '\n';
    for (const auto& s : samples) {
        out += telemetry_csv_row(s);
        out += '\n';
    }
    return out;
}

}  // namespace wecs
