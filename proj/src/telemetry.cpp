#include "wecs/telemetry.hpp"

#include <fmt/format.h>

namespace wecs {

namespace {

std::string violations_field(const std::vector<ViolationKind>& violations) {
    std::string out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) out += '|';
        out += to_string(violations[i]);
    }
    return out;
}

}  // namespace

std::string telemetry_csv_header() {
    return "step,t,v,omega,n,lambda,t_ref,t_applied,p_wt,p_est,p_exported,u_star,level_code,mode,trip_latched,"
           "violations";
}

std::string telemetry_csv_row(const TelemetrySample& s) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", s.step, s.t, s.v, s.omega, s.n, s.lambda,
                       s.t_ref, s.t_applied, s.p_wt, s.p_est, s.p_exported, s.u_star, s.level_code,
                       to_string(s.mode), s.trip_latched ? 1 : 0, violations_field(s.violations));
}

nlohmann::json to_json(const TelemetrySample& s) {
    nlohmann::json violations = nlohmann::json::array();
    for (auto kind : s.violations) violations.push_back(std::string(to_string(kind)));
    return {
        {"step", s.step},
        {"t", s.t},
        {"v", s.v},
        {"omega", s.omega},
        {"n", s.n},
        {"lambda", s.lambda},
        {"t_ref", s.t_ref},
        {"t_applied", s.t_applied},
        {"p_wt", s.p_wt},
        {"p_est", s.p_est},
        {"p_exported", s.p_exported},
        {"u_star", s.u_star},
        {"level_code", s.level_code},
        {"mode", std::string(to_string(s.mode))},
        {"trip_latched", s.trip_latched},
        {"violations", violations},
    };
}

}  // namespace wecs
