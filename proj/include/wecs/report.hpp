#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wecs/config.hpp"
#include "wecs/mppt.hpp"

namespace wecs {

/// Model MPP row next to the matching published row, if any.
struct ComparisonRow {
    MppTableRow model;
    std::optional<ReferenceRow> reference;

    /// (model - reference) / reference for P_wt, omega, n, P_est; empty without reference.
    [[nodiscard]] std::optional<double> dev_p_wt() const;
    [[nodiscard]] std::optional<double> dev_omega() const;
    [[nodiscard]] std::optional<double> dev_rpm() const;
    [[nodiscard]] std::optional<double> dev_p_est() const;

    /// Measured P_gen exceeds the constant-efficiency estimate; reported, not modelled.
    [[nodiscard]] bool p_gen_exceeds_p_est() const;
};

struct TableRequest {
    std::vector<double> wind_speeds{4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::optional<double> eta_conv;  // defaults to the generator's conversion efficiency
};

/// MPP table for the bench parameters with the published P_gen attached for comparison.
[[nodiscard]] std::vector<ComparisonRow> report_table(const BenchConfig& config, const TableRequest& request = {});

/// Aligned text: model columns, relative deviations, and the measured-vs-estimated note.
[[nodiscard]] std::string format_table_text(std::span<const ComparisonRow> rows);

/// v,p_wt,omega,n,p_est,p_gen_ref,dev_p_wt,dev_omega,dev_n,dev_p_est,p_gen_gt_p_est
[[nodiscard]] std::string format_table_csv(std::span<const ComparisonRow> rows);

/// v,omega,lambda,cp,power_w,torque_nm for each wind speed over the omega grid.
[[nodiscard]] std::string power_curve_csv(std::span<const double> wind_speeds, std::span<const double> omega_grid,
                                          const TurbineParams& params);

}  // namespace wecs

namespace wecs {

/// Reads MPP samples from CSV with a header naming the columns v (or wind_speed),
/// p (or power, p_wt) and omega. Extra columns are ignored. Throws ConfigError.
[[nodiscard]] std::vector<MppSample> parse_mpp_samples_csv(const std::string& text);

}  // namespace wecs
