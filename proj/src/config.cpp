#include "wecs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "wecs/error.hpp"

namespace wecs {

using nlohmann::json;

namespace {

/// Reads keys of one JSON object, remembering which were consumed so leftovers can be rejected.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    void read(const char* key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
            out = v->get<double>();
        }
    }

    void read(const char* key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(path_ + "." + key + ": expected an unsigned integer");
            out = v->get<std::uint64_t>();
        }
    }

    void read(const char* key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
            out = v->get<std::string>();
        }
    }

    [[nodiscard]] const json* find(const char* key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    [[nodiscard]] double require_number(const char* key) {
        const json* v = find(key);
        if (v == nullptr || !v->is_number()) throw ConfigError(path_ + "." + key + ": required number missing");
        return v->get<double>();
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
        }
    }

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

EventAction parse_event_action(const std::string& text, const std::string& path) {
    if (text == "trip") return EventAction::Trip;
    if (text == "reset") return EventAction::Reset;
    if (text == "dc_spike") return EventAction::DcSpike;
    if (text == "set_wind") return EventAction::SetWind;
    throw ConfigError(path + ": unknown event action '" + text + "'");
}

Scenario builtin(const std::string& name, WindProfile profile, double duration) {
    Scenario s;
    s.name = name;
    s.profile = std::move(profile);
    s.duration = duration;
    return s;
}

}  // namespace

void BenchConfig::validate() const {
    turbine.validate();
    drivetrain.validate();
    drive.validate();
    generator.validate();
    dc_bus.validate();
    protections.validate();
    control.validate();
    if (!(runtime.dt > 0.0)) throw ConfigError("runtime: dt must be > 0");
    if (!(runtime.telemetry_rate_hz > 0.0)) throw ConfigError("runtime: telemetry_rate_hz must be > 0");
    for (const auto& [name, s] : scenarios) s.validate();
}

const Scenario& BenchConfig::scenario(const std::string& name) const {
    auto it = scenarios.find(name);
    if (it == scenarios.end()) throw ConfigError("unknown scenario '" + name + "'");
    return it->second;
}

BenchConfig default_config() {
    BenchConfig cfg;
    for (double v : {4.0, 8.0, 12.0}) {
        const std::string name = "mpp-" + std::to_string(static_cast<int>(v));
        cfg.scenarios.emplace(name, builtin(name, ConstantWind{v}, 60.0));
    }
    cfg.scenarios.emplace("step-4-12", builtin("step-4-12", StepWind{4.0, 12.0, 30.0}, 90.0));
    cfg.scenarios.emplace("gust", builtin("gust", GustWind{8.0, 4.0, 10.0, 6.0}, 30.0));
    cfg.scenarios.emplace("turbulent", builtin("turbulent", TurbulentWind(8.0, 0.15, 42), 120.0));
    cfg.scenarios.emplace("calm", builtin("calm", ConstantWind{0.0}, 10.0));

    Scenario speed = builtin("speed-control", ConstantWind{8.0}, 60.0);
    speed.mode = OperatingMode::SpeedControl;
    speed.setpoint = 8.0;
    cfg.scenarios.emplace(speed.name, speed);

    Scenario torque = builtin("torque-control", ConstantWind{8.0}, 30.0);
    torque.mode = OperatingMode::TorqueControl;
    torque.setpoint = 60.0;
    cfg.scenarios.emplace(torque.name, torque);

    Scenario trip = builtin("overvoltage-trip", ConstantWind{5.0}, 40.0);
    trip.events = {{20.0, EventAction::DcSpike, 200.0}, {30.0, EventAction::Reset, 0.0}};
    cfg.scenarios.emplace(trip.name, trip);
    return cfg;
}

WindProfile parse_wind_profile(const json& block) {
    Section s(block, "wind");
    std::string type;
    s.read("type", type);
    WindProfile profile;
    if (type == "constant") {
        profile = ConstantWind{s.require_number("v")};
    } else if (type == "step") {
        profile = StepWind{s.require_number("v0"), s.require_number("v1"), s.require_number("t_step")};
    } else if (type == "ramp") {
        profile = RampWind{s.require_number("v0"), s.require_number("v1"), s.require_number("t0"),
                           s.require_number("t1")};
    } else if (type == "gust") {
        profile = GustWind{s.require_number("v_base"), s.require_number("amplitude"), s.require_number("t_start"),
                           s.require_number("duration")};
    } else if (type == "turbulent") {
        double time_constant = 10.0;
        double sample_dt = 0.1;
        std::uint64_t seed = 0;
        s.read("time_constant", time_constant);
        s.read("sample_dt", sample_dt);
        s.read("seed", seed);
        profile = TurbulentWind(s.require_number("v_base"), s.require_number("intensity"), seed, time_constant,
                                sample_dt);
    } else {
        throw ConfigError("wind: unknown type '" + type + "'");
    }
    s.finish();
    validate(profile);
    return profile;
}

json to_json(const WindProfile& profile) {
    if (const auto* w = std::get_if<ConstantWind>(&profile)) return {{"type", "constant"}, {"v", w->v}};
    if (const auto* w = std::get_if<StepWind>(&profile))
        return {{"type", "step"}, {"v0", w->v0}, {"v1", w->v1}, {"t_step", w->t_step}};
    if (const auto* w = std::get_if<RampWind>(&profile))
        return {{"type", "ramp"}, {"v0", w->v0}, {"v1", w->v1}, {"t0", w->t0}, {"t1", w->t1}};
    if (const auto* w = std::get_if<GustWind>(&profile))
        return {{"type", "gust"},
                {"v_base", w->v_base},
                {"amplitude", w->amplitude},
                {"t_start", w->t_start},
                {"duration", w->duration}};
    const auto& w = std::get<TurbulentWind>(profile);
    return {{"type", "turbulent"},       {"v_base", w.v_base()},       {"intensity", w.intensity()},
            {"seed", w.seed()},          {"time_constant", w.time_constant()}, {"sample_dt", w.sample_dt()}};
}

Scenario parse_scenario(const std::string& name, const json& block, double default_dt) {
    Section s(block, "scenarios." + name);
    Scenario sc;
    sc.name = name;
    sc.dt = default_dt;
    std::string mode = "turbine_emulation";
    s.read("mode", mode);
    sc.mode = parse_operating_mode(mode);
    if (const json* sp = s.find("setpoint")) {
        if (!sp->is_number()) throw ConfigError(s.path() + ".setpoint: expected a number");
        sc.setpoint = sp->get<double>();
    }
    s.read("duration", sc.duration);
    s.read("dt", sc.dt);
    s.read("initial_omega", sc.initial_omega);
    const json* wind = s.find("wind");
    if (wind == nullptr) throw ConfigError(s.path() + ": wind profile missing");
    sc.profile = parse_wind_profile(*wind);
    if (const json* events = s.find("events")) {
        if (!events->is_array()) throw ConfigError(s.path() + ".events: expected an array");
        for (const auto& ev : *events) {
            Section e(ev, s.path() + ".events[]");
            ScenarioEvent event;
            event.at = e.require_number("t");
            std::string action;
            e.read("action", action);
            event.action = parse_event_action(action, e.path());
            e.read("value", event.value);
            e.finish();
            sc.events.push_back(event);
        }
    }
    s.finish();
    sc.validate();
    return sc;
}

BenchConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    BenchConfig cfg = default_config();
    Section top(root, "config");

    if (const json* node = top.find("turbine")) {
        Section s(*node, "turbine");
        auto& t = cfg.turbine;
        s.read("rotor_radius", t.rotor_radius);
        s.read("air_density", t.air_density);
        s.read("cp_a", t.cp_a);
        s.read("cp_b", t.cp_b);
        s.read("cp_c", t.cp_c);
        s.read("lambda_cutoff", t.lambda_cutoff);
        s.read("omega_min", t.omega_min);
        s.finish();
    }
    if (const json* node = top.find("drivetrain")) {
        Section s(*node, "drivetrain");
        auto& d = cfg.drivetrain;
        s.read("gear_ratio", d.gear_ratio);
        s.read("gearbox_efficiency", d.gearbox_efficiency);
        s.read("j_motor", d.j_motor);
        s.read("j_gearbox", d.j_gearbox);
        s.read("j_generator", d.j_generator);
        s.read("j_correction", d.j_correction);
        s.read("max_dt", d.max_dt);
        s.finish();
    }
    if (const json* node = top.find("plant")) {
        Section plant(*node, "plant");
        if (const json* drive = plant.find("drive")) {
            Section s(*drive, "plant.drive");
            s.read("time_constant", cfg.drive.torque_time_constant);
            s.read("command_delay", cfg.drive.command_delay);
            s.read("torque_limit", cfg.drive.torque_limit);
            s.finish();
        }
        if (const json* gen = plant.find("generator")) {
            Section s(*gen, "plant.generator");
            s.read("conversion_efficiency", cfg.generator.conversion_efficiency);
            s.read("rated_power", cfg.generator.rated_power);
            s.read("rated_speed", cfg.generator.rated_speed);
            s.finish();
        }
        if (const json* bus = plant.find("dc_bus")) {
            Section s(*bus, "plant.dc_bus");
            s.read("no_load_voltage", cfg.dc_bus.no_load_voltage);
            s.read("volts_per_watt", cfg.dc_bus.volts_per_watt);
            s.read("u_max", cfg.dc_bus.u_max);
            s.finish();
        }
        plant.finish();
    }
    if (const json* node = top.find("protections")) {
        Section s(*node, "protections");
        s.read("omega_max", cfg.protections.omega_max);
        s.read("torque_max", cfg.protections.torque_max);
        s.read("power_max", cfg.protections.power_max);
        s.finish();
    }
    if (const json* node = top.find("control")) {
        Section s(*node, "control");
        s.read("kp", cfg.control.kp);
        s.read("ki", cfg.control.ki);
        s.read("anti_windup_gain", cfg.control.anti_windup_gain);
        s.read("breakaway_torque", cfg.control.breakaway_torque);
        s.read("torque_limit", cfg.control.torque_limit);
        s.finish();
    }
    if (const json* node = top.find("runtime")) {
        Section s(*node, "runtime");
        s.read("dt", cfg.runtime.dt);
        s.read("telemetry_rate_hz", cfg.runtime.telemetry_rate_hz);
        s.finish();
    }
    if (const json* node = top.find("scenarios")) {
        if (!node->is_object()) throw ConfigError("scenarios: expected an object");
        cfg.scenarios.clear();
        for (const auto& [name, block] : node->items()) {
            cfg.scenarios.emplace(name, parse_scenario(name, block, cfg.runtime.dt));
        }
    }
    top.finish();
    cfg.validate();
    return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace wecs
