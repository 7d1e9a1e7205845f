#include "wecs/mppt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wecs/error.hpp"

namespace wecs {

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw DomainError("golden_section_maximize: tol must be > 0");
    if (!(hi > lo)) throw DomainError("golden_section_maximize: empty bracket");
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

TsrOptimum optimal_tsr(const TurbineParams& params, double tol) {
    if (!(tol > 0.0)) throw DomainError("optimal_tsr: tol must be > 0");
    params.validate();
    const double hi = params.lambda_cutoff;
    const double lambda = golden_section_maximize([&](double l) { return power_coefficient(l, params); }, 0.0, hi, tol);
    const double cp = power_coefficient(lambda, params);
    const double edge = 10.0 * tol;
    // A boundary result means Cp is still rising at the cutoff (or never rises).
    if (!(cp > 0.0) || lambda <= edge || lambda >= hi - edge ||
        power_coefficient_derivative(std::max(0.0, hi - edge), params) > 0.0) {
        throw ModelError("optimal_tsr: Cp has no interior maximum on (0, lambda_cutoff)");
    }
    return {lambda, cp};
}

OperatingPoint optimal_operating_point(double wind_speed, const TurbineParams& params) {
    if (!(wind_speed > 0.0)) throw DomainError("optimal_operating_point: wind speed must be > 0");
    const TsrOptimum opt = optimal_tsr(params);
    OperatingPoint op;
    op.wind_speed = wind_speed;
    op.omega = opt.lambda_star * wind_speed / params.rotor_radius;
    op.tsr = opt.lambda_star;
    op.power = aerodynamic_power(wind_speed, op.omega, params);
    op.torque = op.power / op.omega;
    op.rpm = rad_per_sec_to_rpm(op.omega);
    return op;
}

MppResult maximum_power_locus(std::span<const double> wind_speeds, const TurbineParams& params) {
    const TsrOptimum opt = optimal_tsr(params);
    MppResult result{opt.lambda_star, opt.cp_star, {}};
    result.points.reserve(wind_speeds.size());
    for (double v : wind_speeds) result.points.push_back(optimal_operating_point(v, params));
    return result;
}

double mppt_power_gain(const TurbineParams& params) {
    const TsrOptimum opt = optimal_tsr(params);
    const double r = params.rotor_radius;
    return 0.5 * params.air_density * params.swept_area() * opt.cp_star * r * r * r /
           (opt.lambda_star * opt.lambda_star * opt.lambda_star);
}

std::vector<MppTableRow> mpp_table(std::span<const double> wind_speeds, const TurbineParams& params,
                                   double eta_conv, std::span<const ReferenceRow> reference) {
    std::vector<MppTableRow> rows;
    rows.reserve(wind_speeds.size());
    for (double v : wind_speeds) {
        const OperatingPoint op = optimal_operating_point(v, params);
        MppTableRow row;
        row.wind_speed = v;
        row.p_wt = op.power;
        row.omega = op.omega;
        row.rpm = op.rpm;
        row.p_est = eta_conv * op.power;
        for (const auto& ref : reference) {
            if (std::abs(ref.wind_speed - v) < 1e-9) row.p_gen_reference = ref.p_gen;
        }
        rows.push_back(row);
    }
    return rows;
}

IdentificationResult identify_params(std::span<const MppSample> samples, double air_density,
                                     const TurbineParams& params_partial, const IdentificationOptions& options) {
    if (samples.size() < 2) throw IdentificationError("identify_params: at least 2 samples are required");
    if (!(air_density > 0.0)) throw IdentificationError("identify_params: air density must be > 0");
    for (const auto& s : samples) {
        if (!(s.wind_speed > 0.0 && s.power > 0.0 && s.omega > 0.0))
            throw IdentificationError("identify_params: samples must be strictly positive");
    }

    const auto n = static_cast<double>(samples.size());
    double mean_speed_ratio = 0.0;  // omega / v
    double mean_power_coeff = 0.0;  // 2P / v^3 = rho pi R^2 Cp*
    for (const auto& s : samples) {
        mean_speed_ratio += s.omega / s.wind_speed / n;
        mean_power_coeff += 2.0 * s.power / (s.wind_speed * s.wind_speed * s.wind_speed) / n;
    }

    TurbineParams model = params_partial;
    model.air_density = air_density;
    const TsrOptimum opt = optimal_tsr(model);

    // Radius at which the fitted TSR matches the Cp model's optimum.
    auto mismatch = [&](double r) { return r * mean_speed_ratio - opt.lambda_star; };
    double lo = options.radius_lo;
    double hi = options.radius_hi;
    if (mismatch(lo) * mismatch(hi) > 0.0)
        throw IdentificationError("identify_params: no radius in range matches the optimal TSR");
    while (hi - lo > options.root_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if ((mismatch(lo) < 0.0) == (mismatch(mid) < 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    IdentificationResult result;
    result.rotor_radius = 0.5 * (lo + hi);
    result.lambda_star = opt.lambda_star;
    result.cp_star_model = opt.cp_star;
    const double area = std::numbers::pi * result.rotor_radius * result.rotor_radius;
    result.cp_star = mean_power_coeff / (air_density * area);
    result.radius_from_power = std::sqrt(mean_power_coeff / (air_density * std::numbers::pi * opt.cp_star));

    double worst = std::abs(result.cp_star - opt.cp_star) / opt.cp_star;
    for (const auto& s : samples) {
        const double tsr_res = (result.rotor_radius * s.omega / s.wind_speed - opt.lambda_star) / opt.lambda_star;
        const double k = 2.0 * s.power / (s.wind_speed * s.wind_speed * s.wind_speed);
        const double power_res = (k - mean_power_coeff) / mean_power_coeff;
        result.tsr_residuals.push_back(tsr_res);
        result.power_residuals.push_back(power_res);
        worst = std::max({worst, std::abs(tsr_res), std::abs(power_res)});
    }
    result.max_residual = worst;
    if (worst > options.threshold) {
        throw IdentificationError("identify_params: inconsistent samples, max relative residual " +
                                  std::to_string(worst) + " exceeds " + std::to_string(options.threshold));
    }
    return result;
}

}  // namespace wecs
