#include "wecs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "wecs/error.hpp"
#include "wecs/turbine.hpp"

namespace wecs {

namespace detail {

struct TurbulenceSeries {
    std::mutex mutex;
    std::mt19937_64 rng;
    std::normal_distribution<double> normal{0.0, 1.0};
    std::vector<double> deviation;
};

}  // namespace detail

TurbulentWind::TurbulentWind(double v_base, double intensity, std::uint64_t seed, double time_constant,
                             double sample_dt)
    : v_base_(v_base),
      intensity_(intensity),
      seed_(seed),
      time_constant_(time_constant),
      sample_dt_(sample_dt),
      series_(std::make_shared<detail::TurbulenceSeries>()) {
    series_->rng.seed(seed);
}

double TurbulentWind::at(double t) const {
    const double pos = t / sample_dt_;
    const auto idx = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(idx);
    double x0 = 0.0;
    double x1 = 0.0;
    {
        std::lock_guard lock(series_->mutex);
        auto& dev = series_->deviation;
        const double sigma = intensity_ * v_base_;
        const double decay = std::exp(-sample_dt_ / time_constant_);
        const double kick = sigma * std::sqrt(1.0 - decay * decay);
        if (dev.empty()) dev.push_back(sigma * series_->normal(series_->rng));
        while (dev.size() < idx + 2) dev.push_back(decay * dev.back() + kick * series_->normal(series_->rng));
        x0 = dev[idx];
        x1 = dev[idx + 1];
    }
    return std::max(0.0, v_base_ + x0 + frac * (x1 - x0));
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const WindProfile& profile) {
    std::visit(Overloaded{
                   [](const ConstantWind& w) { require(w.v >= 0.0, "constant wind: v must be >= 0"); },
                   [](const StepWind& w) {
                       require(w.v0 >= 0.0 && w.v1 >= 0.0, "step wind: speeds must be >= 0");
                       require(w.t_step >= 0.0, "step wind: t_step must be >= 0");
                   },
                   [](const RampWind& w) {
                       require(w.v0 >= 0.0 && w.v1 >= 0.0, "ramp wind: speeds must be >= 0");
                       require(w.t0 >= 0.0 && w.t1 > w.t0, "ramp wind: need 0 <= t0 < t1");
                   },
                   [](const GustWind& w) {
                       require(w.v_base >= 0.0, "gust wind: v_base must be >= 0");
                       require(w.v_base + w.amplitude >= 0.0, "gust wind: peak speed must be >= 0");
                       require(w.duration > 0.0 && w.t_start >= 0.0, "gust wind: need duration > 0, t_start >= 0");
                   },
                   [](const TurbulentWind& w) {
                       require(w.v_base() >= 0.0, "turbulent wind: v_base must be >= 0");
                       require(w.intensity() >= 0.0, "turbulent wind: intensity must be >= 0");
                       require(w.time_constant() > 0.0 && w.sample_dt() > 0.0,
                               "turbulent wind: time constant and sample dt must be > 0");
                   },
               },
               profile);
}

double wind_at(double t, const WindProfile& profile) {
    if (!(t >= 0.0)) throw DomainError("wind_at: t must be >= 0");
    return std::visit(Overloaded{
                          [](const ConstantWind& w) { return w.v; },
                          [t](const StepWind& w) { return t >= w.t_step ? w.v1 : w.v0; },
                          [t](const RampWind& w) {
                              if (t <= w.t0) return w.v0;
                              if (t >= w.t1) return w.v1;
                              return w.v0 + (w.v1 - w.v0) * (t - w.t0) / (w.t1 - w.t0);
                          },
                          [t](const GustWind& w) {
                              if (t < w.t_start || t > w.t_start + w.duration) return w.v_base;
                              const double phase = 2.0 * std::numbers::pi * (t - w.t_start) / w.duration;
                              return w.v_base + w.amplitude * 0.5 * (1.0 - std::cos(phase));
                          },
                          [t](const TurbulentWind& w) { return w.at(t); },
                      },
                      profile);
}

void Scenario::validate() const {
    wecs::validate(profile);
    require(std::isfinite(duration) && duration > 0.0, "scenario '" + name + "': duration must be > 0");
    require(std::isfinite(dt) && dt > 0.0, "scenario '" + name + "': dt must be > 0");
    require(initial_omega >= 0.0, "scenario '" + name + "': initial_omega must be >= 0");
    const bool needs_setpoint = mode != OperatingMode::TurbineEmulation;
    require(needs_setpoint == setpoint.has_value(),
            "scenario '" + name + "': setpoint must be given exactly when mode is not turbine_emulation");
    for (const auto& ev : events) {
        require(ev.at >= 0.0, "scenario '" + name + "': event time must be >= 0");
        if (ev.action == EventAction::SetWind) require(ev.value >= 0.0, "scenario '" + name + "': wind must be >= 0");
    }
}

void ControlParams::validate() const {
    require(kp >= 0.0 && ki >= 0.0 && anti_windup_gain >= 0.0, "control: gains must be >= 0");
    require(breakaway_torque >= 0.0, "control: breakaway torque must be >= 0");
    require(torque_limit > 0.0, "control: torque limit must be > 0");
}

double torque_reference(OperatingMode mode, double measured_omega, double wind_speed, std::optional<double> setpoint,
                        const TurbineParams& turbine, const ControlParams& control, PiState& pi, double dt) {
    if (!(measured_omega >= 0.0)) throw DomainError("torque_reference: measured omega must be >= 0");
    auto saturate = [&](double torque) { return std::clamp(torque, -control.torque_limit, control.torque_limit); };
    switch (mode) {
        case OperatingMode::TurbineEmulation: {
            if (wind_speed <= 0.0) return 0.0;
            if (measured_omega < turbine.omega_min) return saturate(control.breakaway_torque);
            return saturate(aerodynamic_torque(wind_speed, measured_omega, turbine));
        }
        case OperatingMode::TorqueControl: {
            if (!setpoint) throw ConfigError("torque_reference: torque control needs a setpoint");
            return saturate(*setpoint);
        }
        case OperatingMode::SpeedControl: {
            if (!setpoint) throw ConfigError("torque_reference: speed control needs a setpoint");
            const double error = *setpoint - measured_omega;
            const double unsaturated = control.kp * error + pi.integral;
            const double output = saturate(unsaturated);
            pi.integral += dt * (control.ki * error + control.anti_windup_gain * (output - unsaturated));
            return output;
        }
    }
    return 0.0;
}

}  // namespace wecs
