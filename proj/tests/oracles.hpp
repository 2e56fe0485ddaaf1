#pragma once

// Independent reference formulas for the tests. Nothing here calls the
// library's dynamics; rotations are built from elementary matrices.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Speeds = Eigen::Vector4d;

inline Mat3 rz(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return m;
}
inline Mat3 ry(double a) {
    Mat3 m;
    m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return m;
}
inline Mat3 rx(double a) {
    Mat3 m;
    m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    return m;
}

struct Geometry {
    double L = 0.2;
    double d = 0.05;
    double k_f = 1e-5;
    double k_t = 0.02;
    std::array<double, 4> alpha{};
    std::array<double, 4> beta{};
};

/// Four-motor sum of moment arms and reaction torques, no dampers.
inline Vec3 torque_sum(const Geometry& g, const Speeds& w) {
    Vec3 tau = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const double psi = k * M_PI / 2;
        const Mat3 r = rz(psi) * ry(g.beta[k]) * rx(g.alpha[k]);
        const Vec3 o = rz(psi) * Vec3(g.L, 0, g.d);
        const Vec3 f(0, 0, g.k_f * w(k) * w(k));
        const double spin = (k % 2 == 0) ? 1.0 : -1.0;
        tau += o.cross(r * f) + r * (spin * g.k_t * f);
    }
    return tau;
}

/// Regular "+" quadcopter mixer.
inline Vec3 plus_mixer(const Geometry& g, const Speeds& w) {
    const Eigen::Vector4d u = w.array().square();
    return {g.k_f * g.L * (u(1) - u(3)), g.k_f * g.L * (u(2) - u(0)),
            g.k_t * g.k_f * (u(0) - u(1) + u(2) - u(3))};
}

/// Closed form for beta = 0 and twist (a, -a, a, -a). The pitch row is
/// the roll row rotated a quarter turn about z.
inline Vec3 twist_closed_form(const Geometry& g, double a, const Speeds& w) {
    const Eigen::Vector4d u = w.array().square();
    const double s = std::sin(a);
    const double c = std::cos(a);
    const double kf = g.k_f;
    return {kf * g.d * s * (u(0) - u(2)) + (kf * g.L * c + g.k_t * kf * s) * (u(1) - u(3)),
            (kf * g.L * c + g.k_t * kf * s) * (u(2) - u(0)) + kf * g.d * s * (u(3) - u(1)),
            (g.k_t * kf * c - kf * g.L * s) * (u(0) - u(1) + u(2) - u(3))};
}

/// Body rates of a torque-free body with I_xx = I_yy = i1, I_zz = i3.
inline Vec3 axisymmetric_rates(const Vec3& w0, double i1, double i3, double t) {
    const double lambda = (i3 - i1) / i1 * w0.z();
    const double c = std::cos(lambda * t);
    const double s = std::sin(lambda * t);
    return {w0.x() * c - w0.y() * s, w0.x() * s + w0.y() * c, w0.z()};
}

/// Lift change of a constant-chord blade integrated by the composite
/// Simpson rule with the exact arctangent angle-of-attack change.
inline double blade_integral_simpson(double rho, double sigma, double chord, double radius, double odot_z,
                                     double gamma_dot, int n = 2000) {
    const double spin = std::abs(gamma_dot);
    auto f = [&](double r) {
        if (r == 0.0) {
            return 0.0;
        }
        const double v = spin * r;
        return 0.5 * rho * v * v * sigma * (-std::atan(odot_z / v)) * chord;
    };
    const double h = radius / n;
    double sum = f(0.0) + f(radius);
    for (int k = 1; k < n; ++k) {
        sum += f(k * h) * ((k % 2) ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

/// Least-squares slope of log|y| against t.
template <typename Ts, typename Ys>
double log_slope(const Ts& t, const Ys& y) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double ly = std::log(std::abs(y[k]));
        st += t[k];
        sy += ly;
        stt += t[k] * t[k];
        sty += t[k] * ly;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace oracle
