#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"
#include "wecs/drivetrain.hpp"
#include "wecs/plant.hpp"
#include "wecs/scenario.hpp"
#include "wecs/turbine.hpp"

namespace wecs {

struct RuntimeParams {
    double dt = 1e-3;                 // s, default scenario step
    double telemetry_rate_hz = 50.0;  // streaming rate; disk logs are full rate
};

/// Everything the bench needs: model parameters, limits and named scenarios.
struct BenchConfig {
    TurbineParams turbine;
    DrivetrainParams drivetrain;
    DrivePlant drive;
    GeneratorModel generator;
    DcBusModel dc_bus;
    ProtectionLimits protections;
    ControlParams control;
    RuntimeParams runtime;
    std::map<std::string, Scenario> scenarios;

    void validate() const;

    /// Throws ConfigError for an unknown name.
    [[nodiscard]] const Scenario& scenario(const std::string& name) const;
};

/// Built-in parameters and the stock scenario set.
[[nodiscard]] BenchConfig default_config();

/// Parses a JSON config (// comments allowed). Missing keys keep their defaults,
/// unknown keys are rejected. Throws ConfigError.
[[nodiscard]] BenchConfig parse_config(const std::string& text);
[[nodiscard]] BenchConfig load_config(const std::filesystem::path& path);

/// Scenario block as found under "scenarios"; `dt` defaults to the runtime dt.
[[nodiscard]] Scenario parse_scenario(const std::string& name, const nlohmann::json& block, double default_dt);

[[nodiscard]] WindProfile parse_wind_profile(const nlohmann::json& block);
[[nodiscard]] nlohmann::json to_json(const WindProfile& profile);

}  // namespace wecs
