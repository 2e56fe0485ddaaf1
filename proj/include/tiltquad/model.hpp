#pragma once

// Physical parameters and state of the tilted-rotor quadcopter.

#include <array>

#include <Eigen/Dense>

#include "tiltquad/frames.hpp"

namespace tiltquad {

using RotorSpeeds = Eigen::Vector4d;

/// Per-motor mounting angles and propeller coefficients.
struct RotorConfig {
    std::array<double, 4> alpha{};  ///< twist about x of M_i [rad]
    std::array<double, 4> beta{};   ///< dihedral about y of M_i [rad]
    /// Direction of the reaction torque; (-1)^(i+1) unless overridden.
    std::array<int, 4> spin_sign{1, -1, 1, -1};
    double k_f = 1e-5;             ///< thrust coefficient [N s^2/rad^2]
    double k_t = 0.02;             ///< reaction torque per unit thrust [m]
    double azimuth_offset = 0.0;   ///< 0 for "+", pi/4 for "x"
    double max_speed = 2000.0;     ///< [rad/s]

    void validate() const;
};

/// Blade-element constants and the linearised damper gains.
struct BladeAero {
    double rho = 1.225;         ///< air density [kg/m^3]
    double sigma = 5.7;         ///< lift-curve slope [1/rad]
    double chord = 0.02;        ///< [m]
    double blade_radius = 0.1;  ///< [m]
    double zeta_roll = 0.1;     ///< [N s/m]
    double zeta_pitch = 0.1;
    double zeta_yaw = 0.1;

    void validate() const;

    /// 1/4 c sigma rho |gamma_dot| R^2, the damper gain implied by the
    /// blade-element closed form at a fixed rotor speed.
    double equivalent_zeta(double gamma_dot) const;
};

enum class DamperModel {
    Linear,        ///< fixed gains zeta_roll / zeta_pitch / zeta_yaw
    BladeElement,  ///< gain recomputed from the current rotor speed
};

struct ModelOptions {
    bool dihedral_dampers = true;
    bool gyroscopic = true;
    bool translational_dihedral = true;
    DamperModel damper_model = DamperModel::Linear;
};

struct QuadParams {
    double mass = 1.0;                               ///< [kg]
    Vec3 inertia_diag = Vec3(0.01, 0.01, 0.02);      ///< I_xx, I_yy, I_zz [kg m^2]
    double prop_inertia = 1e-6;                      ///< spin-axis inertia of one propeller
    double arm_length = 0.2;                         ///< L [m]
    double com_offset = 0.05;                        ///< d [m], positive puts the COM below the rotor plane
    double gravity = 9.81;                           ///< [m/s^2], inertial frame is z-up
    RotorConfig rotor;
    BladeAero blade;
    ModelOptions model;

    void validate() const;

    Mat3 inertia() const { return inertia_diag.asDiagonal(); }
    Vec3 gravity_vector() const { return Vec3(0.0, 0.0, -gravity); }

    Vec3 motor_origin(MotorIndex i) const;
    Mat3 motor_rotation(MotorIndex i) const;
};

/// The reference parameter set used throughout the tests and by the CLI
/// when no configuration file is given: m = 1 kg, L = 0.2 m, d = 0.05 m,
/// k_f = 1e-5, k_t = 0.02, I = diag(0.01, 0.01, 0.02), zeta = 0.1, flat rotors.
QuadParams default_params();

struct State {
    Vec3 position = Vec3::Zero();     ///< inertial [m]
    Vec3 velocity = Vec3::Zero();     ///< inertial [m/s]
    Mat3 attitude = Mat3::Identity(); ///< inertial-from-body rotation
    Vec3 body_rates = Vec3::Zero();   ///< [p, q, r] [rad/s]
    RotorSpeeds rotor_speeds = RotorSpeeds::Zero();

    bool all_finite() const;
};

struct StateDerivative {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Mat3 attitude = Mat3::Zero();
    Vec3 body_rates = Vec3::Zero();
    RotorSpeeds rotor_speeds = RotorSpeeds::Zero();
};

/// Throws InvalidArgument unless the state is finite, the attitude is a
/// rotation and every rotor speed is below the configured maximum.
void validate_state(const State& state, const QuadParams& params);

}  // namespace tiltquad
