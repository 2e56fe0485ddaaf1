#pragma once

// Nonlinear rigid-body equations of motion of the tilted-rotor quadcopter.

#include <array>

#include "tiltquad/model.hpp"

namespace tiltquad {

/// Per-motor thrust split into the speed-dependent part and the
/// dihedral-effect change, both in the motor frame.
struct MotorThrust {
    Vec3 nominal = Vec3::Zero();
    Vec3 delta = Vec3::Zero();
};

/// Thrust of every motor at the given state. The dihedral change is zero
/// when params.model.dihedral_dampers is off.
std::array<MotorThrust, 4> motor_thrusts(const State& state, const QuadParams& params);

/// Body torque from thrust moment arms and propeller reaction torques.
/// The reaction torque follows the speed-dependent thrust only.
Vec3 control_torque(const State& state, const QuadParams& params);

/// Total rotor force in the body frame.
Vec3 body_force(const State& state, const QuadParams& params);

/// Moment -omega x sum_i I_p omega^{p_i}, where omega^{p_i} is the
/// propeller rate (spin about z_{M_i} plus the body rate) in the body frame.
Vec3 gyroscopic_torque(const Vec3& omega, const QuadParams& params, const State& state);

/// I^-1 (tau - omega x (I omega + sum I_p omega^{p_i})).
Vec3 angular_acceleration(const State& state, const QuadParams& params);

/// (1/m) R_{I,B} sum_i R_{B,M_i} F_i + g.
Vec3 translational_acceleration(const State& state, const QuadParams& params);

/// Time derivative of the full state with the rotor speeds replaced by
/// rotor_cmd (motors follow commands instantly).
StateDerivative state_derivative(const State& state, const RotorSpeeds& rotor_cmd, const QuadParams& params);

}  // namespace tiltquad
