#pragma once

#include <optional>
#include <span>

namespace wecs {

/// One row of the laboratory MPP experiment, values as published (2-decimal rounding).
struct ReferenceRow {
    double wind_speed;  // m/s
    double p_wt;        // W, optimal turbine power
    double omega;       // rad/s
    double rpm;
    double p_est;  // W, estimated electrical output
    double p_gen;  // W, measured at the grid connection
};

/// The nine measured rows, v = 4..12 m/s.
[[nodiscard]] std::span<const ReferenceRow> reference_mpp_rows() noexcept;

/// Row whose wind speed equals v within 1e-9, if any.
[[nodiscard]] std::optional<ReferenceRow> find_reference_row(double wind_speed) noexcept;

}  // namespace wecs
