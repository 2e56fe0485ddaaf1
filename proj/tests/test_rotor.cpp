#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tiltquad/presets.hpp"
#include "tiltquad/rotor.hpp"

using namespace tiltquad;
using doctest::Approx;

namespace {

QuadParams twist(double a) {
    QuadParams p = default_params();
    p.rotor.alpha = {a, -a, a, -a};
    return p;
}

State yawing(double r) {
    State s;
    s.body_rates = Vec3(0, 0, r);
    return s;
}

}  // namespace

TEST_CASE("thrust and reaction torque") {
    CHECK(thrust_force(1e-5, 500.0).z() == Approx(2.5));
    CHECK(thrust_force(1e-5, 0.0).norm() == 0.0);
    CHECK(thrust_force(1e-5, -500.0).z() == Approx(2.5));
    const Vec3 f(0, 0, 2.5);
    CHECK(reaction_torque(MotorIndex(1), 0.02, f).z() == Approx(0.05));
    CHECK(reaction_torque(MotorIndex(2), 0.02, f).z() == Approx(-0.05));
    CHECK(reaction_torque(MotorIndex(4), 0.02, Vec3(Vec3::Zero())).norm() == 0.0);
    CHECK(reaction_torque(-1, 0.02, f).z() == Approx(-0.05));
}

TEST_CASE("rotor parameter validation") {
    QuadParams p = default_params();
    p.rotor.k_f = -1;
    CHECK_THROWS_WITH_AS(p.validate(), "k_f must be > 0", InvalidArgument);
    p = default_params();
    p.rotor.spin_sign[2] = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = default_params();
    p.blade.zeta_yaw = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("motor point velocity") {
    QuadParams flat = default_params();
    flat.com_offset = 0.0;
    CHECK(motor_point_velocity(State{}, MotorIndex(1), flat).norm() == 0.0);
    CHECK((motor_point_velocity(yawing(1.0), MotorIndex(1), flat) - Vec3(0, 0.2, 0)).norm() < 1e-16);

    const Vec3 v = motor_point_velocity(yawing(1.0), MotorIndex(1), twist(0.05));
    const Vec3 expected = oracle::rx(0.05).transpose() * Vec3(0, 0.2, 0);
    CHECK((v - expected).norm() < 1e-16);
    CHECK(v.y() == Approx(0.1997501).epsilon(1e-7));
    CHECK(v.z() == Approx(-0.0099958).epsilon(1e-5));

    // the parts add up to the whole, translation included
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    QuadParams p = apply_preset(default_params(), ConfigPreset::from_id(1), 0.1, 0.15);
    for (int k = 0; k < 100; ++k) {
        State s;
        s.body_rates = Vec3(u(rng), u(rng), u(rng));
        s.velocity = Vec3(u(rng), u(rng), u(rng));
        s.attitude = Eigen::AngleAxisd(u(rng), Vec3(u(rng), u(rng), 1).normalized()).toRotationMatrix();
        for (int i = 1; i <= 4; ++i) {
            const MotorIndex m(i);
            const Mat3 r = p.motor_rotation(m);
            const Vec3 brute = r.transpose() * (s.attitude.transpose() * s.velocity +
                                                s.body_rates.cross(p.motor_origin(m)));
            CHECK((motor_point_velocity(s, m, p) - brute).norm() < 1e-14);
            CHECK((motor_point_velocity_parts(s, m, p).total() - brute).norm() < 1e-14);
        }
    }
}

TEST_CASE("delta_aoa") {
    CHECK(delta_aoa(0.0, 500.0, 0.05) == 0.0);
    CHECK(delta_aoa(0.5, 500.0, 0.1) == Approx(0.0099997).epsilon(1e-6));
    CHECK(delta_aoa(-0.5, 500.0, 0.1) == -delta_aoa(0.5, 500.0, 0.1));
    CHECK_THROWS_AS(delta_aoa(0.5, 0.0, 0.1), SingularInputError);
    CHECK_THROWS_AS(delta_aoa(0.5, 500.0, 0.0), SingularInputError);
}

TEST_CASE("blade-element thrust change") {
    const BladeAero blade;
    CHECK(delta_thrust_blade(blade, 0.0, 500.0).norm() == 0.0);
    const double expected = -0.25 * 0.02 * 5.7 * 1.225 * 0.5 * 500.0 * 0.1 * 0.1;
    CHECK(delta_thrust_blade(blade, 0.5, 500.0).z() == Approx(expected).epsilon(1e-14));
    CHECK(delta_thrust_blade(blade, 0.5, 500.0).z() == Approx(-0.0872813).epsilon(1e-6));
    CHECK(delta_thrust_blade(blade, -0.5, 500.0).z() == Approx(0.0872813).epsilon(1e-6));

    // odd in odot_z, even in the spin direction, linear in odot_z
    for (double w : {300.0, 500.0, 900.0}) {
        for (double o : {0.1, 0.4, 1.2}) {
            const double f = delta_thrust_blade(blade, o, w).z();
            CHECK(delta_thrust_blade(blade, -o, w).z() == -f);
            CHECK(delta_thrust_blade(blade, o, -w).z() == f);
            CHECK(f / o == Approx(-blade.equivalent_zeta(w)).epsilon(1e-14));
        }
    }

    CHECK_THROWS_AS(delta_thrust_blade(blade, 10.0, 500.0), ModelValidityError);
    CHECK_THROWS_AS(delta_thrust_blade_integral(blade, 10.0, 500.0), ModelValidityError);
}

TEST_CASE("blade-element quadrature") {
    const BladeAero blade;
    for (double w : {300.0, 500.0, 800.0}) {
        for (double o : {-1.2, -0.3, 0.2, 1.0}) {
            const double quad = delta_thrust_blade_integral(blade, o, w).z();
            const double simpson =
                oracle::blade_integral_simpson(blade.rho, blade.sigma, blade.chord, blade.blade_radius, o, w);
            CHECK(quad == Approx(simpson).epsilon(1e-9));
            // small-angle regime: the closed form agrees within 1%
            if (std::abs(o) / (w * blade.blade_radius) < 0.05) {
                CHECK(quad == Approx(delta_thrust_blade(blade, o, w).z()).epsilon(0.01));
            }
        }
    }
}

TEST_CASE("linear damper") {
    CHECK(delta_thrust_linear(0.1, 0.5).z() == Approx(-0.05));
    CHECK(delta_thrust_linear(0.1, 0.0).norm() == 0.0);
    const BladeAero blade;
    const double w = 495.0;
    CHECK(delta_thrust_linear(blade.equivalent_zeta(w), 0.7).z() ==
          Approx(delta_thrust_blade(blade, 0.7, w).z()).epsilon(1e-15));
}

TEST_CASE("total delta thrust") {
    QuadParams p = twist(0.05);
    CHECK(total_delta_thrust(State{}, MotorIndex(1), p).norm() == 0.0);
    const double expected = 0.1 * 0.2 * std::sin(0.05);
    CHECK(total_delta_thrust(yawing(1.0), MotorIndex(1), p).z() == Approx(expected).epsilon(1e-14));
    CHECK(total_delta_thrust(yawing(1.0), MotorIndex(1), p).z() == Approx(9.99584e-4).epsilon(1e-5));
    CHECK(total_delta_thrust(yawing(1.0), MotorIndex(2), p).z() == Approx(-expected).epsilon(1e-14));

    // four-motor torque sum against -4 zeta L^2 sin^2(a) r
    for (double r : {0.1, 0.5, 1.0}) {
        Vec3 tau = Vec3::Zero();
        for (int i = 1; i <= 4; ++i) {
            const MotorIndex m(i);
            tau += p.motor_origin(m).cross(p.motor_rotation(m) * total_delta_thrust(yawing(r), m, p));
        }
        const double analytic = -4.0 * 0.1 * 0.04 * std::pow(std::sin(0.05), 2) * r;
        CHECK(std::abs(tau.z() - analytic) < 1e-12);
        CHECK(std::abs(tau.x()) < 1e-12);
        CHECK(std::abs(tau.y()) < 1e-12);
    }

    // flat, centred: no yaw damper at all
    QuadParams flat = default_params();
    flat.com_offset = 0.0;
    for (int i = 1; i <= 4; ++i) {
        CHECK(total_delta_thrust(yawing(0.8), MotorIndex(i), flat).norm() == 0.0);
    }

    // translation is gated by its own flag
    State moving;
    moving.velocity = Vec3(0, 0, 1.0);
    CHECK(total_delta_thrust(moving, MotorIndex(1), flat).z() == Approx(-0.1));
    flat.model.translational_dihedral = false;
    CHECK(total_delta_thrust(moving, MotorIndex(1), flat).norm() == 0.0);
}

TEST_CASE("blade-element damper mode") {
    QuadParams p = twist(0.05);
    p.model.damper_model = DamperModel::BladeElement;
    State s = yawing(1.0);
    s.rotor_speeds = RotorSpeeds::Constant(495.0);
    const double zeta = p.blade.equivalent_zeta(495.0);
    CHECK(total_delta_thrust(s, MotorIndex(1), p).z() == Approx(zeta * 0.2 * std::sin(0.05)).epsilon(1e-13));
    s.body_rates = Vec3(0, 0, 1e4);
    CHECK_THROWS_AS(total_delta_thrust(s, MotorIndex(1), p), ModelValidityError);
}
