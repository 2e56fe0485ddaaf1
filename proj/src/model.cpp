#include "tiltquad/model.hpp"

#include <cmath>
#include <string>

namespace tiltquad {
namespace {

void require(bool ok, const std::string& module, const std::string& message) {
    if (!ok) {
        throw InvalidArgument(module, message);
    }
}

}  // namespace

void RotorConfig::validate() const {
    require(std::isfinite(k_f) && k_f > 0.0, "rotor", "k_f must be > 0");
    require(std::isfinite(k_t) && k_t > 0.0, "rotor", "k_t must be > 0");
    require(std::isfinite(max_speed) && max_speed > 0.0, "rotor", "max_speed must be > 0");
    require(std::isfinite(azimuth_offset), "rotor", "azimuth_offset must be finite");
    for (int i = 0; i < 4; ++i) {
        require(std::isfinite(alpha[i]), "rotor", "alpha must be finite");
        require(std::isfinite(beta[i]), "rotor", "beta must be finite");
        require(spin_sign[i] == 1 || spin_sign[i] == -1, "rotor", "spin_sign entries must be +1 or -1");
    }
}

void BladeAero::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(rho), "rotor", "rho must be > 0");
    require(positive(sigma), "rotor", "sigma must be > 0");
    require(positive(chord), "rotor", "chord must be > 0");
    require(positive(blade_radius), "rotor", "blade_radius must be > 0");
    require(positive(zeta_roll), "rotor", "zeta_roll must be > 0");
    require(positive(zeta_pitch), "rotor", "zeta_pitch must be > 0");
    require(positive(zeta_yaw), "rotor", "zeta_yaw must be > 0");
}

double BladeAero::equivalent_zeta(double gamma_dot) const {
    return 0.25 * chord * sigma * rho * std::abs(gamma_dot) * blade_radius * blade_radius;
}

void QuadParams::validate() const {
    require(std::isfinite(mass) && mass > 0.0, "dynamics", "mass must be > 0");
    require(inertia_diag.allFinite() && (inertia_diag.array() > 0.0).all(), "dynamics",
            "inertia diagonal entries must be > 0");
    require(std::isfinite(prop_inertia) && prop_inertia >= 0.0, "dynamics", "prop_inertia must be >= 0");
    require(prop_inertia < 0.1 * inertia_diag.minCoeff(), "dynamics",
            "prop_inertia must be small compared to the body inertia");
    require(std::isfinite(arm_length) && arm_length > 0.0, "dynamics", "arm_length must be > 0");
    require(std::isfinite(com_offset), "dynamics", "com_offset must be finite");
    require(std::isfinite(gravity) && gravity >= 0.0, "dynamics", "gravity must be >= 0");
    rotor.validate();
    blade.validate();
}

Vec3 QuadParams::motor_origin(MotorIndex i) const {
    return tiltquad::motor_origin(i, arm_length, com_offset, rotor.azimuth_offset);
}

Mat3 QuadParams::motor_rotation(MotorIndex i) const {
    const int k = i.zero_based();
    return tiltquad::motor_rotation(i, rotor.alpha[k], rotor.beta[k], rotor.azimuth_offset);
}

QuadParams default_params() { return QuadParams{}; }

bool State::all_finite() const {
    return position.allFinite() && velocity.allFinite() && attitude.allFinite() &&
           body_rates.allFinite() && rotor_speeds.allFinite();
}

void validate_state(const State& state, const QuadParams& params) {
    require(state.all_finite(), "dynamics", "state has non-finite entries");
    require(is_rotation(state.attitude), "dynamics", "attitude is not a rotation matrix");
    require((state.rotor_speeds.array().abs() <= params.rotor.max_speed).all(), "dynamics",
            "rotor speed exceeds max_speed");
}

}  // namespace tiltquad
