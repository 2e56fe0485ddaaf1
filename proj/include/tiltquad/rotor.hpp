#pragma once

// Propeller thrust, reaction torque and the dihedral-effect thrust change
// caused by airflow along the motor axis.

#include <cmath>

#include "tiltquad/frames.hpp"
#include "tiltquad/model.hpp"

namespace tiltquad {

/// Thrust of one propeller in its motor frame: [0, 0, k_f gamma_dot^2].
template <typename Scalar>
Vector3<Scalar> thrust_force(Scalar k_f, Scalar gamma_dot) {
    return Vector3<Scalar>(Scalar(0), Scalar(0), k_f * gamma_dot * gamma_dot);
}

/// Reaction torque in the motor frame, (-1)^(i+1) k_t F.
template <typename Derived>
Vector3<typename Derived::Scalar> reaction_torque(MotorIndex i, typename Derived::Scalar k_t,
                                                  const Eigen::MatrixBase<Derived>& force) {
    return static_cast<typename Derived::Scalar>(i.alternating_sign()) * k_t * force;
}

/// Same as above with an explicit spin sign (overridden handedness).
template <typename Derived>
Vector3<typename Derived::Scalar> reaction_torque(int spin_sign, typename Derived::Scalar k_t,
                                                  const Eigen::MatrixBase<Derived>& force) {
    return static_cast<typename Derived::Scalar>(spin_sign) * k_t * force;
}

/// Decrease of the blade angle of attack caused by an axial motor velocity
/// odot_z at radius r: atan(odot_z / (gamma_dot r)).
double delta_aoa(double odot_z, double gamma_dot, double radius);

/// Closed-form thrust change for a constant-chord blade in the hover regime,
/// [0, 0, -1/4 c sigma rho odot_z |gamma_dot| R^2]. Throws
/// ModelValidityError when |odot_z| >= 0.2 |gamma_dot| R.
Vec3 delta_thrust_blade(const BladeAero& blade, double odot_z, double gamma_dot);

/// Thrust change obtained by integrating the lift of each blade element
/// along the radius with the perturbed angle of attack (no small-angle
/// expansion of the arctangent).
Vec3 delta_thrust_blade_integral(const BladeAero& blade, double odot_z, double gamma_dot);

/// Linear damper form: [0, 0, -zeta odot_z].
inline Vec3 delta_thrust_linear(double zeta, double odot_z) { return Vec3(0.0, 0.0, -zeta * odot_z); }

/// Velocity of the motor-i origin relative to the inertial frame, expressed
/// in M_i, split by the rigid-body motion component that produced it.
struct MotorVelocityParts {
    Vec3 roll = Vec3::Zero();         ///< from p
    Vec3 pitch = Vec3::Zero();        ///< from q
    Vec3 yaw = Vec3::Zero();          ///< from r
    Vec3 translation = Vec3::Zero();  ///< from the vehicle velocity

    Vec3 total() const { return roll + pitch + yaw + translation; }
};

MotorVelocityParts motor_point_velocity_parts(const State& state, MotorIndex i, const QuadParams& params);

/// R_{B,M_i}^T (R_{I,B}^T s_dot + omega x O_{M_i}).
Vec3 motor_point_velocity(const State& state, MotorIndex i, const QuadParams& params);

/// Sum of the roll, pitch and yaw damper thrust changes of motor i (in M_i).
/// The translational part of the motor velocity is included when
/// params.model.translational_dihedral is set and uses the mean of the
/// roll and pitch gains.
Vec3 total_delta_thrust(const State& state, MotorIndex i, const QuadParams& params);

}  // namespace tiltquad
