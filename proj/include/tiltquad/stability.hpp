#pragma once

// Yaw transfer function, finite-difference linearisation about hover,
// pole sweeps and the configuration ranking.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tiltquad/model.hpp"
#include "tiltquad/presets.hpp"

namespace tiltquad {

/// gain / (s - pole).
struct FirstOrderTF {
    double gain = 0.0;
    double pole = 0.0;

    bool unstable() const { return pole > 0.0; }
    bool marginal() const { return pole == 0.0; }
};

/// Yaw control gain C1 = (k_t k_f cos a - k_f L sin a) / I_zz for a
/// vehicle with zero dihedral and twist (a, -a, a, -a); a is alpha_1 and
/// may be negative. Throws InvalidArgument for any other geometry.
double yaw_gain(const QuadParams& params);

/// Effective yaw damping 4 zeta_yaw L^2 sin^2 a of the same geometry.
double zeta_prime_yaw(const QuadParams& params);

/// C1/s without the damper; C1/(s + zeta'/I_zz) with it.
FirstOrderTF yaw_transfer_function(const QuadParams& params, bool with_damper);

/// Body torque produced by the dihedral thrust changes alone when the
/// vehicle performs a pure yaw rotation at rate r (hover speeds, no
/// translation), i.e. sum_i O_i x R_i dF_i.
Vec3 yaw_damper_torque(const QuadParams& params, double yaw_rate);

/// Reduced hover state ordering used by LinearModel.
enum LinearState : int {
    kRoll = 0,   ///< attitude perturbation about x_B
    kPitch = 1,  ///< about y_B
    kYaw = 2,    ///< about z_B
    kP = 3,
    kQ = 4,
    kR = 5,
    kVx = 6,
    kVy = 7,
    kVz = 8,
};

struct LinearModel {
    Eigen::Matrix<double, 9, 9> state_matrix = Eigen::Matrix<double, 9, 9>::Zero();
    /// Inputs are perturbations of the squared rotor speeds.
    Eigen::Matrix<double, 9, 4> input_matrix = Eigen::Matrix<double, 9, 4>::Zero();
    Eigen::Matrix<std::complex<double>, 9, 1> eigenvalues;
    RotorSpeeds trim_speeds = RotorSpeeds::Zero();
    /// max |A(eps) - A(eps/2)|, the finite-difference convergence check.
    double convergence = 0.0;

    Eigen::Matrix3d rate_block() const { return state_matrix.block<3, 3>(kP, kP); }
};

struct LinearizeOptions {
    double eps = 1e-6;        ///< central-difference step
    bool gyroscopic = false;  ///< include propeller gyroscopic coupling
};

/// Central-difference Jacobian of the dynamics about hover trim. The
/// attitude perturbation is taken in the body frame, R = R_trim exp(S(dtheta)),
/// and the velocity is inertial. Entries below the difference round-off
/// floor are set to zero.
LinearModel linearize_hover(const QuadParams& params, const LinearizeOptions& options = {});

/// Poles of the pure-rotation channels: eigenvalues of the body-rate block
/// of the state matrix, each assigned to the rate axis that dominates its
/// eigenvector.
struct ChannelPoles {
    std::complex<double> roll;
    std::complex<double> pitch;
    std::complex<double> yaw;
};

ChannelPoles channel_poles(const LinearModel& model);

struct DSweepPoint {
    double d = 0.0;
    std::optional<std::complex<double>> roll_pole;
    std::optional<std::complex<double>> pitch_pole;
    RotorSpeeds trim_speeds = RotorSpeeds::Zero();
    std::string error;  ///< non-empty when trim or linearisation failed

    /// Rightmost of the roll and pitch channel poles.
    std::optional<double> dominant_real() const;
};

/// Roll/pitch channel poles as a function of the COM offset. Points are
/// evaluated independently; failures are recorded and the sweep continues.
std::vector<DSweepPoint> pole_sweep_d(const QuadParams& params, const std::vector<double>& d_values,
                                      const LinearizeOptions& options = {});

struct AlphaSweepPoint {
    double alpha = 0.0;
    std::optional<std::complex<double>> yaw_pole;  ///< from the linearisation
    double analytic_pole = 0.0;
    double gain = 0.0;
    std::string error;
};

/// Yaw channel versus twist magnitude for the twist pattern of preset_id
/// (dihedral zeroed).
std::vector<AlphaSweepPoint> pole_sweep_alpha(const QuadParams& params, int preset_id,
                                              const std::vector<double>& alpha_values,
                                              const LinearizeOptions& options = {});

struct RankEntry {
    int config_id = 0;
    bool qualified = true;
    std::string diagnostic;
    double metric = 0.0;                 ///< leftmost channel pole real part
    ChannelPoles channels;               ///< roll/pitch from the dihedral-only model, yaw from the twist-only model
    std::vector<std::complex<double>> poles;  ///< full model eigenvalues of the preset
    RotorSpeeds trim_speeds = RotorSpeeds::Zero();
    double yaw_gain = 0.0;               ///< C1 of the twist-only model
    double maneuverability = 0.0;        ///< -metric + |C1|, informational
};

/// Ranks presets 1..6 from the most to the least stable.
///
/// Each channel is analysed under the isolating assumption used to derive
/// its transfer function: the roll and pitch channel poles come from the
/// preset with its twist removed, the yaw channel pole from the preset with
/// its dihedral removed. The metric is the leftmost (most negative) real
/// part among the three channel poles. Ties (relative 1e-9) are broken by
/// the yaw pole, then the roll pole, then the smaller yaw control gain
/// |C1|, then the preset id. Presets whose trim fails are placed last with
/// a diagnostic.
std::vector<RankEntry> rank_configurations(double base_alpha, double base_beta, const QuadParams& params,
                                           const LinearizeOptions& options = {});

}  // namespace tiltquad
