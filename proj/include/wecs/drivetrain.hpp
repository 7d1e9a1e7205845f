#pragma once

#include <functional>

namespace wecs {

/// Single-mass drivetrain seen from the turbine side.
///
/// All inertias are lumped turbine-side, including the gearbox. j_correction
/// compensates the acquisition/actuation delay of the emulation loop and may be
/// negative as long as the total stays positive.
struct DrivetrainParams {
    double gear_ratio = 1.0;          // generator speed / turbine speed
    double gearbox_efficiency = 1.0;  // (0, 1]
    double j_motor = 0.05;            // kg m^2, bench placeholder
    double j_gearbox = 0.01;          // kg m^2, bench placeholder
    double j_generator = 0.03;        // kg m^2, bench placeholder
    double j_correction = 0.0;        // kg m^2
    double max_dt = 0.01;             // s, largest accepted integration step

    /// Inertia of the physical parts only (total minus correction).
    [[nodiscard]] double physical_inertia() const noexcept { return j_motor + j_gearbox + j_generator; }

    void validate() const;
};

struct ShaftState {
    double omega = 0.0;  // rad/s, turbine side, never negative
    double t = 0.0;      // s
};

struct GeneratorSide {
    double omega = 0.0;
    double torque = 0.0;
};

/// omega_g = omega * i, T_g = eta_gb * T / i.
[[nodiscard]] GeneratorSide reflect_to_generator(double omega, double torque, const DrivetrainParams& params);

/// j_motor + j_gearbox + j_generator + j_correction. Throws ConfigError when not positive.
[[nodiscard]] double total_inertia(const DrivetrainParams& params);

/// Work done over one step, integrated with the same RK4 stages as the speed.
struct EnergyTally {
    double drive_work = 0.0;  // J, integral of T_drive * omega
    double load_work = 0.0;   // J, integral of T_load(omega) * omega
};

using LoadTorque = std::function<double(double omega)>;

/// One classical RK4 step of J domega/dt = T_drive - T_load(omega).
///
/// The drive torque is held for the whole step; the load is re-evaluated at every
/// stage. Speed is clamped at 0 from below. Throws StepSizeError when dt is not in
/// (0, max_dt]. When `tally` is given the step's work terms are added to it.
[[nodiscard]] ShaftState step_dynamics(const ShaftState& state, double drive_torque, const LoadTorque& load,
                                       const DrivetrainParams& params, double dt, EnergyTally* tally = nullptr);

/// Constant load torque over the step.
[[nodiscard]] ShaftState step_dynamics(const ShaftState& state, double drive_torque, double load_torque,
                                       const DrivetrainParams& params, double dt, EnergyTally* tally = nullptr);

struct CorrectionSweep {
    double jc_min = -0.5;      // kg m^2
    double jc_max = 0.5;       // kg m^2
    double resolution = 1e-4;  // kg m^2
    double horizon = 1.0;      // s
    double dt = 1e-3;          // s
    /// Speed feedback inside the delayed reference (e.g. -dT_aero/domega), N m s/rad.
    double delayed_damping = 0.0;
    /// Speed-proportional load acting without delay (e.g. the generator), N m s/rad.
    double direct_damping = 0.0;
};

/// Correction inertia that best reproduces the undelayed plant's speed response.
///
/// Reference trajectory: the physical inertia driven by a probe torque step with all
/// feedback instantaneous. Candidate trajectory: inertia physical + J_c where the drive
/// applies the reference computed loop_delay earlier. Every J_c on the sweep grid is
/// simulated and the one with the smallest integrated squared speed error wins.
/// Throws EstimationError when the minimum lies on the edge of the range.
[[nodiscard]] double estimate_correction_inertia(double loop_delay, const DrivetrainParams& params,
                                                 double probe_torque, const CorrectionSweep& sweep = {});

}  // namespace wecs
