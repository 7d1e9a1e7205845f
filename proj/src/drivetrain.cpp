#include "wecs/drivetrain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "wecs/error.hpp"

namespace wecs {

void DrivetrainParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("drivetrain: ") + what);
    };
    require(std::isfinite(gear_ratio) && gear_ratio > 0.0, "gear_ratio must be > 0");
    require(std::isfinite(gearbox_efficiency) && gearbox_efficiency > 0.0 && gearbox_efficiency <= 1.0,
            "gearbox_efficiency must be in (0, 1]");
    require(std::isfinite(max_dt) && max_dt > 0.0, "max_dt must be > 0");
    (void)total_inertia(*this);
}

GeneratorSide reflect_to_generator(double omega, double torque, const DrivetrainParams& params) {
    return {omega * params.gear_ratio, params.gearbox_efficiency * torque / params.gear_ratio};
}

double total_inertia(const DrivetrainParams& params) {
    const double j = params.j_motor + params.j_gearbox + params.j_generator + params.j_correction;
    if (!std::isfinite(j) || j <= 0.0) {
        throw ConfigError("drivetrain: total inertia must be > 0, got " + std::to_string(j));
    }
    return j;
}

ShaftState step_dynamics(const ShaftState& state, double drive_torque, const LoadTorque& load,
                         const DrivetrainParams& params, double dt, EnergyTally* tally) {
    if (!(dt > 0.0) || dt > params.max_dt) {
        throw StepSizeError("step_dynamics: dt " + std::to_string(dt) + " outside (0, " +
                            std::to_string(params.max_dt) + "]");
    }
    const double inertia = total_inertia(params);
    auto accel = [&](double omega, double& load_torque) {
        load_torque = load(omega);
        return (drive_torque - load_torque) / inertia;
    };

    const double w1 = state.omega;
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double l4 = 0.0;
    const double k1 = accel(w1, l1);
    const double w2 = w1 + 0.5 * dt * k1;
    const double k2 = accel(w2, l2);
    const double w3 = w1 + 0.5 * dt * k2;
    const double k3 = accel(w3, l3);
    const double w4 = w1 + dt * k3;
    const double k4 = accel(w4, l4);

    if (tally != nullptr) {
        tally->drive_work += dt / 6.0 * drive_torque * (w1 + 2.0 * w2 + 2.0 * w3 + w4);
        tally->load_work += dt / 6.0 * (l1 * w1 + 2.0 * l2 * w2 + 2.0 * l3 * w3 + l4 * w4);
    }

    ShaftState next;
    next.omega = std::max(0.0, w1 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    next.t = state.t + dt;
    return next;
}

ShaftState step_dynamics(const ShaftState& state, double drive_torque, double load_torque,
                         const DrivetrainParams& params, double dt, EnergyTally* tally) {
    return step_dynamics(state, drive_torque, [load_torque](double) { return load_torque; }, params, dt, tally);
}

namespace {

std::vector<double> reference_response(const DrivetrainParams& physical, double probe_torque,
                                       const CorrectionSweep& sweep, long long steps) {
    const double damping = sweep.delayed_damping + sweep.direct_damping;
    const LoadTorque load = [damping](double omega) { return damping * omega; };
    std::vector<double> omega(static_cast<std::size_t>(steps));
    ShaftState s;
    for (long long k = 0; k < steps; ++k) {
        s = step_dynamics(s, probe_torque, load, physical, sweep.dt);
        omega[static_cast<std::size_t>(k)] = s.omega;
    }
    return omega;
}

double delayed_loop_cost(const DrivetrainParams& candidate, double probe_torque, const CorrectionSweep& sweep,
                         long long delay_steps, const std::vector<double>& reference) {
    const double direct = sweep.direct_damping;
    const LoadTorque load = [direct](double omega) { return direct * omega; };
    // References issued but not yet applied by the drive; the drive starts from zero torque.
    std::deque<double> pending(static_cast<std::size_t>(delay_steps), 0.0);
    ShaftState s;
    double cost = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        pending.push_back(probe_torque - sweep.delayed_damping * s.omega);
        const double applied = pending.front();
        pending.pop_front();
        s = step_dynamics(s, applied, load, candidate, sweep.dt);
        const double err = s.omega - reference[k];
        cost += err * err * sweep.dt;
    }
    return cost;
}

}  // namespace

double estimate_correction_inertia(double loop_delay, const DrivetrainParams& params, double probe_torque,
                                   const CorrectionSweep& sweep) {
    if (!(loop_delay >= 0.0)) throw EstimationError("estimate_correction_inertia: loop_delay must be >= 0");
    if (!(sweep.resolution > 0.0) || !(sweep.jc_max > sweep.jc_min) || !(sweep.horizon > 0.0) || !(sweep.dt > 0.0))
        throw ConfigError("estimate_correction_inertia: invalid sweep configuration");

    DrivetrainParams physical = params;
    physical.j_correction = 0.0;
    physical.max_dt = std::max(physical.max_dt, sweep.dt);
    const double j_phys = total_inertia(physical);

    const long long steps = std::llround(sweep.horizon / sweep.dt);
    const long long delay_steps = std::llround(loop_delay / sweep.dt);
    const std::vector<double> reference = reference_response(physical, probe_torque, sweep, steps);

    const long long count = std::llround(std::floor((sweep.jc_max - sweep.jc_min) / sweep.resolution)) + 1;
    double best_cost = std::numeric_limits<double>::infinity();
    long long best = -1;
    long long first_valid = -1;
    for (long long k = 0; k < count; ++k) {
        const double jc = sweep.jc_min + static_cast<double>(k) * sweep.resolution;
        if (j_phys + jc <= 0.0) continue;
        if (first_valid < 0) first_valid = k;
        DrivetrainParams candidate = physical;
        candidate.j_correction = jc;
        const double cost = delayed_loop_cost(candidate, probe_torque, sweep, delay_steps, reference);
        if (cost < best_cost) {
            best_cost = cost;
            best = k;
        }
    }
    if (best < 0 || best == first_valid || best == count - 1) {
        throw EstimationError("estimate_correction_inertia: no minimizer inside [" + std::to_string(sweep.jc_min) +
                              ", " + std::to_string(sweep.jc_max) + "]");
    }
    return sweep.jc_min + static_cast<double>(best) * sweep.resolution;
}

}  // namespace wecs
