#include "tiltquad/rotor.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tiltquad/error.hpp"

namespace tiltquad {

double delta_aoa(double odot_z, double gamma_dot, double radius) {
    const double tip_speed = gamma_dot * radius;
    if (!(std::abs(tip_speed) > 0.0)) {
        throw SingularInputError("rotor", "delta_aoa: gamma_dot * r must be non-zero");
    }
    return std::atan(odot_z / tip_speed);
}

namespace {

void check_hover_regime(const BladeAero& blade, double odot_z, double gamma_dot) {
    if (!(std::abs(odot_z) < 0.2 * std::abs(gamma_dot) * blade.blade_radius)) {
        throw ModelValidityError("rotor",
                                 "blade-element thrust change outside the hover regime "
                                 "(|odot_z| must be < 0.2 |gamma_dot| R)");
    }
}

}  // namespace

Vec3 delta_thrust_blade(const BladeAero& blade, double odot_z, double gamma_dot) {
    check_hover_regime(blade, odot_z, gamma_dot);
    return Vec3(0.0, 0.0, -blade.equivalent_zeta(gamma_dot) * odot_z);
}

Vec3 delta_thrust_blade_integral(const BladeAero& blade, double odot_z, double gamma_dot) {
    check_hover_regime(blade, odot_z, gamma_dot);
    const double spin = std::abs(gamma_dot);
    // dF = 1/2 rho (spin r)^2 sigma (-dTheta(r)) c dr
    auto integrand = [&](double r) {
        if (r <= 0.0) {
            return 0.0;
        }
        const double v = spin * r;
        return 0.5 * blade.rho * v * v * blade.sigma * (-delta_aoa(odot_z, spin, r)) * blade.chord;
    };
    const double df = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, blade.blade_radius, 15, 1e-13);
    return Vec3(0.0, 0.0, df);
}

MotorVelocityParts motor_point_velocity_parts(const State& state, MotorIndex i, const QuadParams& params) {
    const Mat3 to_motor = params.motor_rotation(i).transpose();
    const Vec3 origin = params.motor_origin(i);
    const Vec3& w = state.body_rates;

    MotorVelocityParts parts;
    parts.roll = to_motor * Vec3(w.x(), 0.0, 0.0).cross(origin);
    parts.pitch = to_motor * Vec3(0.0, w.y(), 0.0).cross(origin);
    parts.yaw = to_motor * Vec3(0.0, 0.0, w.z()).cross(origin);
    parts.translation = to_motor * (state.attitude.transpose() * state.velocity);
    return parts;
}

Vec3 motor_point_velocity(const State& state, MotorIndex i, const QuadParams& params) {
    return motor_point_velocity_parts(state, i, params).total();
}

Vec3 total_delta_thrust(const State& state, MotorIndex i, const QuadParams& params) {
    const MotorVelocityParts parts = motor_point_velocity_parts(state, i, params);
    const BladeAero& blade = params.blade;

    if (params.model.damper_model == DamperModel::BladeElement) {
        double odot_z = parts.roll.z() + parts.pitch.z() + parts.yaw.z();
        if (params.model.translational_dihedral) {
            odot_z += parts.translation.z();
        }
        return delta_thrust_blade(blade, odot_z, state.rotor_speeds(i.zero_based()));
    }

    Vec3 df = delta_thrust_linear(blade.zeta_roll, parts.roll.z()) +
              delta_thrust_linear(blade.zeta_pitch, parts.pitch.z()) +
              delta_thrust_linear(blade.zeta_yaw, parts.yaw.z());
    if (params.model.translational_dihedral) {
        df += delta_thrust_linear(0.5 * (blade.zeta_roll + blade.zeta_pitch), parts.translation.z());
    }
    return df;
}

}  // namespace tiltquad
