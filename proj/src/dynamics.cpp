#include "tiltquad/dynamics.hpp"

#include "tiltquad/error.hpp"
#include "tiltquad/rotor.hpp"

namespace tiltquad {

std::array<MotorThrust, 4> motor_thrusts(const State& state, const QuadParams& params) {
    std::array<MotorThrust, 4> out;
    for (int k = 0; k < 4; ++k) {
        const MotorIndex i(k + 1);
        out[k].nominal = thrust_force(params.rotor.k_f, state.rotor_speeds(k));
        if (params.model.dihedral_dampers) {
            out[k].delta = total_delta_thrust(state, i, params);
        }
    }
    return out;
}

Vec3 control_torque(const State& state, const QuadParams& params) {
    const auto thrusts = motor_thrusts(state, params);
    Vec3 tau = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const MotorIndex i(k + 1);
        const Mat3 rot = params.motor_rotation(i);
        const Vec3 force = thrusts[k].nominal + thrusts[k].delta;
        tau += params.motor_origin(i).cross(rot * force) +
               rot * reaction_torque(params.rotor.spin_sign[k], params.rotor.k_t, thrusts[k].nominal);
    }
    return tau;
}

Vec3 body_force(const State& state, const QuadParams& params) {
    const auto thrusts = motor_thrusts(state, params);
    Vec3 force = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        force += params.motor_rotation(MotorIndex(k + 1)) * (thrusts[k].nominal + thrusts[k].delta);
    }
    return force;
}

Vec3 gyroscopic_torque(const Vec3& omega, const QuadParams& params, const State& state) {
    Vec3 momentum = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const Mat3 rot = params.motor_rotation(MotorIndex(k + 1));
        const Vec3 spin(0.0, 0.0, params.rotor.spin_sign[k] * state.rotor_speeds(k));
        momentum += params.prop_inertia * (rot * spin + omega);
    }
    return -omega.cross(momentum);
}

Vec3 angular_acceleration(const State& state, const QuadParams& params) {
    const Vec3& w = state.body_rates;
    const Vec3 inertia = params.inertia_diag;
    Vec3 rhs = control_torque(state, params) - w.cross(inertia.cwiseProduct(w));
    if (params.model.gyroscopic) {
        rhs += gyroscopic_torque(w, params, state);
    }
    return rhs.cwiseQuotient(inertia);
}

Vec3 translational_acceleration(const State& state, const QuadParams& params) {
    return state.attitude * body_force(state, params) / params.mass + params.gravity_vector();
}

StateDerivative state_derivative(const State& state, const RotorSpeeds& rotor_cmd, const QuadParams& params) {
    if (!state.all_finite() || !rotor_cmd.allFinite()) {
        throw InvalidArgument("dynamics", "state_derivative: non-finite input");
    }
    State s = state;
    s.rotor_speeds = rotor_cmd;

    StateDerivative d;
    d.position = s.velocity;
    d.velocity = translational_acceleration(s, params);
    d.attitude = s.attitude * skew(s.body_rates);
    d.body_rates = angular_acceleration(s, params);
    d.rotor_speeds.setZero();
    return d;
}

}  // namespace tiltquad
