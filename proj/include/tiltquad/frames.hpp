#pragma once

// Rotation algebra and motor-frame geometry for the body frame B, the
// inertial frame I and the four motor frames M_i.
//
// Convention: a rotation matrix maps coordinates expressed in the child
// frame into the parent frame, so the columns of the body-from-motor
// rotation are the motor-frame axes written in body coordinates.

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "tiltquad/error.hpp"

namespace tiltquad {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

enum class Axis { X, Y, Z };

/// One of the four motors, numbered 1..4 counter-clockwise from +x_B.
class MotorIndex {
public:
    static constexpr int kCount = 4;

    explicit MotorIndex(int i) : value_(i) {
        if (i < 1 || i > kCount) {
            throw InvalidArgument("frames", "motor index must be in 1..4, got " + std::to_string(i));
        }
    }

    int value() const noexcept { return value_; }
    int zero_based() const noexcept { return value_ - 1; }

    /// (-1)^(i+1): +1 for motors 1 and 3, -1 for motors 2 and 4.
    int alternating_sign() const noexcept { return (value_ % 2 == 1) ? 1 : -1; }

    friend bool operator==(MotorIndex, MotorIndex) = default;

private:
    int value_;
};

/// Right-handed rotation about a coordinate axis.
template <typename Scalar>
Matrix3<Scalar> rot_axis(Axis axis, Scalar angle) {
    using std::cos;
    using std::sin;
    const Scalar c = cos(angle);
    const Scalar s = sin(angle);
    Matrix3<Scalar> r;
    switch (axis) {
        case Axis::X:
            r << 1, 0, 0,
                 0, c, -s,
                 0, s, c;
            break;
        case Axis::Y:
            r << c, 0, s,
                 0, 1, 0,
                 -s, 0, c;
            break;
        case Axis::Z:
            r << c, -s, 0,
                 s, c, 0,
                 0, 0, 1;
            break;
    }
    return r;
}

/// S(v) with S(v) w = v x w.
template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& v) {
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
    Matrix3<typename Derived::Scalar> s;
    s << 0, -v(2), v(1),
         v(2), 0, -v(0),
         -v(1), v(0), 0;
    return s;
}

/// Inverse of skew() on the antisymmetric part.
template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    return Vector3<Scalar>(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) / Scalar(2);
}

/// Azimuth of motor i about z_B. The default offset of zero is the "+"
/// layout; pi/4 gives the "x" layout.
template <typename Scalar = double>
Scalar motor_azimuth(MotorIndex i, Scalar azimuth_offset = Scalar(0)) {
    return static_cast<Scalar>(i.zero_based()) * std::numbers::pi_v<Scalar> / Scalar(2) + azimuth_offset;
}

/// Position of the motor-frame origin in the body frame: R_z(azimuth) [L, 0, d].
template <typename Scalar>
Vector3<Scalar> motor_origin(MotorIndex i, Scalar arm_length, Scalar com_offset,
                             Scalar azimuth_offset = Scalar(0)) {
    if (!(arm_length > Scalar(0))) {
        throw InvalidArgument("frames", "arm length must be > 0");
    }
    return rot_axis(Axis::Z, motor_azimuth(i, azimuth_offset)) *
           Vector3<Scalar>(arm_length, Scalar(0), com_offset);
}

/// Body-from-motor rotation R_z(azimuth) R_y(beta) R_x(alpha), with alpha
/// the twist and beta the dihedral angle of the motor.
template <typename Scalar>
Matrix3<Scalar> motor_rotation(MotorIndex i, Scalar alpha, Scalar beta,
                               Scalar azimuth_offset = Scalar(0)) {
    return rot_axis(Axis::Z, motor_azimuth(i, azimuth_offset)) * rot_axis(Axis::Y, beta) *
           rot_axis(Axis::X, alpha);
}

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r, double tol = 1e-9) {
    const auto rtr = (r.transpose() * r).eval();
    return (rtr - Matrix3<typename Derived::Scalar>::Identity()).norm() < tol &&
           std::abs(r.determinant() - 1.0) < tol;
}

/// Exponential map of so(3), exp(S(phi)), by Rodrigues' formula.
template <typename Derived>
Matrix3<typename Derived::Scalar> exp_so3(const Eigen::MatrixBase<Derived>& phi) {
    using Scalar = typename Derived::Scalar;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar theta2 = phi.squaredNorm();
    const Matrix3<Scalar> k = skew(phi);
    Scalar a;
    Scalar b;
    if (theta2 < Scalar(1e-12)) {
        a = Scalar(1) - theta2 / Scalar(6);
        b = Scalar(0.5) - theta2 / Scalar(24);
    } else {
        const Scalar theta = sqrt(theta2);
        a = sin(theta) / theta;
        b = (Scalar(1) - cos(theta)) / theta2;
    }
    return Matrix3<Scalar>::Identity() + a * k + b * k * k;
}

/// Nearest rotation in the Frobenius sense (orthogonal polar factor).
/// Rejects singular or reflecting input and anything farther than 0.1
/// from a rotation.
template <typename Derived>
Matrix3<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (!m.allFinite()) {
        throw SingularInputError("frames", "orthonormalize: non-finite matrix");
    }
    Eigen::JacobiSVD<Matrix3<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(2) > Scalar(1e-9) * sv(0)) || m.determinant() <= Scalar(0)) {
        throw SingularInputError("frames", "orthonormalize: singular or reflecting matrix");
    }
    Matrix3<Scalar> r = svd.matrixU() * svd.matrixV().transpose();
    if ((m - r).norm() > Scalar(0.1)) {
        throw InvalidArgument("frames", "orthonormalize: matrix is not close to a rotation");
    }
    return r;
}

/// Advances R by a constant body rate over dt: R exp(S(omega dt)).
template <typename DerivedR, typename DerivedW>
Matrix3<typename DerivedR::Scalar> integrate_attitude(const Eigen::MatrixBase<DerivedR>& r,
                                                      const Eigen::MatrixBase<DerivedW>& omega_body,
                                                      typename DerivedR::Scalar dt) {
    if (!(dt > 0)) {
        throw InvalidArgument("frames", "integrate_attitude: dt must be > 0");
    }
    if (!is_rotation(r)) {
        throw InvalidArgument("frames", "integrate_attitude: input is not a rotation matrix");
    }
    return orthonormalize((r * exp_so3((omega_body * dt).eval())).eval());
}

}  // namespace tiltquad
