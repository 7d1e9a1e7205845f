#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wecs/common.hpp"

namespace wecs {

/// Snapshot of one simulation step. Every field comes from the same step.
struct TelemetrySample {
    long long step = 0;
    double t = 0.0;       // s
    double v = 0.0;       // m/s
    double omega = 0.0;   // rad/s, turbine side
    double n = 0.0;       // rpm
    double lambda = 0.0;  // tip-speed ratio, 0 in calm air
    double t_ref = 0.0;      // N m, torque reference sent to the drive
    double t_applied = 0.0;  // N m, torque the drive actually produces
    double p_wt = 0.0;        // W, aerodynamic power at the current point
    double p_est = 0.0;       // W, generator electrical output
    double p_exported = 0.0;  // W, power delivered through the converter
    double u_star = 0.0;      // V, DC bus
    int level_code = 0;
    OperatingMode mode = OperatingMode::TurbineEmulation;
    bool trip_latched = false;
    std::vector<ViolationKind> violations;
};

/// Header row listing every sample field, comma separated, no trailing newline.
[[nodiscard]] std::string telemetry_csv_header();

/// One CSV row. Doubles use the shortest representation that round-trips.
[[nodiscard]] std::string telemetry_csv_row(const TelemetrySample& sample);

[[nodiscard]] nlohmann::json to_json(const TelemetrySample& sample);

}  // namespace wecs
