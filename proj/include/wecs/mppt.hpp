#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wecs/reference_data.hpp"
#include "wecs/turbine.hpp"

namespace wecs {

struct TsrOptimum {
    double lambda_star = 0.0;
    double cp_star = 0.0;
};

struct MppResult {
    double lambda_star = 0.0;
    double cp_star = 0.0;
    std::vector<OperatingPoint> points;
};

/// Maximizer of a unimodal function on [lo, hi] by golden-section search, to |dx| <= tol.
/// Ties keep the left sub-interval, so a flat zero tail to the right of the peak is harmless.
[[nodiscard]] double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                             double tol);

/// Optimal tip-speed ratio on (0, lambda_cutoff). Throws ModelError when the maximum
/// sits on the bracket boundary or Cp* <= 0.
[[nodiscard]] TsrOptimum optimal_tsr(const TurbineParams& params, double tol = 1e-6);

/// omega* = lambda* v / R and the turbine quantities there. Throws DomainError for v <= 0.
[[nodiscard]] OperatingPoint optimal_operating_point(double wind_speed, const TurbineParams& params);

[[nodiscard]] MppResult maximum_power_locus(std::span<const double> wind_speeds, const TurbineParams& params);

/// K such that K * omega^3 is the MPP power for the wind that makes omega optimal.
[[nodiscard]] double mppt_power_gain(const TurbineParams& params);

struct MppTableRow {
    double wind_speed = 0.0;
    double p_wt = 0.0;
    double omega = 0.0;
    double rpm = 0.0;
    double p_est = 0.0;
    std::optional<double> p_gen_reference;
};

/// MPP report rows; when reference rows are given, matching wind speeds carry the measured P_gen.
[[nodiscard]] std::vector<MppTableRow> mpp_table(std::span<const double> wind_speeds, const TurbineParams& params,
                                                 double eta_conv, std::span<const ReferenceRow> reference = {});

struct MppSample {
    double wind_speed = 0.0;  // m/s
    double power = 0.0;       // W at the MPP
    double omega = 0.0;       // rad/s at the MPP
};

struct IdentificationOptions {
    double radius_lo = 0.1;
    double radius_hi = 10.0;
    double root_tol = 1e-12;
    /// Maximum accepted relative residual.
    double threshold = 0.01;
};

struct IdentificationResult {
    double rotor_radius = 0.0;
    double cp_star = 0.0;      // fitted from the power samples at the identified radius
    double lambda_star = 0.0;  // from the Cp model
    double cp_star_model = 0.0;
    double radius_from_power = 0.0;  // cross-check: sqrt(2P/v^3 / (rho pi Cp*_model))
    std::vector<double> tsr_residuals;    // per sample (R*omega/v - lambda*) / lambda*
    std::vector<double> power_residuals;  // per sample (2P/v^3 - mean) / mean
    double max_residual = 0.0;
};

/// Recovers rotor radius and Cp* from MPP samples, given air density and the Cp coefficients
/// in `params_partial` (its radius and density are ignored). Throws IdentificationError when
/// fewer than two samples, non-positive values, or residuals above the threshold.
[[nodiscard]] IdentificationResult identify_params(std::span<const MppSample> samples, double air_density,
                                                   const TurbineParams& params_partial,
                                                   const IdentificationOptions& options = {});

}  // namespace wecs
