#include "tiltquad/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tiltquad/dynamics.hpp"
#include "tiltquad/error.hpp"
#include "tiltquad/parallel.hpp"
#include "tiltquad/rotor.hpp"
#include "tiltquad/sim.hpp"

namespace tiltquad {

// ---------------------------------------------------------------------------
// Analytic yaw channel

namespace {

constexpr double kAngleTol = 1e-12;

/// alpha_1 of a zero-dihedral vehicle with twist (a, -a, a, -a).
double alternating_twist(const QuadParams& params) {
    const auto& alpha = params.rotor.alpha;
    const auto& beta = params.rotor.beta;
    for (double b : beta) {
        if (std::abs(b) > kAngleTol) {
            throw InvalidArgument("stability", "yaw transfer function requires zero dihedral angles");
        }
    }
    const double a = alpha[0];
    if (std::abs(alpha[1] + a) > kAngleTol || std::abs(alpha[2] - a) > kAngleTol ||
        std::abs(alpha[3] + a) > kAngleTol) {
        throw InvalidArgument("stability",
                              "yaw transfer function requires uniform twist with pattern (a, -a, a, -a)");
    }
    return a;
}

}  // namespace

double yaw_gain(const QuadParams& params) {
    const double a = alternating_twist(params);
    const auto& r = params.rotor;
    return (r.k_t * r.k_f * std::cos(a) - r.k_f * params.arm_length * std::sin(a)) / params.inertia_diag.z();
}

double zeta_prime_yaw(const QuadParams& params) {
    const double a = alternating_twist(params);
    const double s = std::sin(a);
    return 4.0 * params.blade.zeta_yaw * params.arm_length * params.arm_length * s * s;
}

FirstOrderTF yaw_transfer_function(const QuadParams& params, bool with_damper) {
    FirstOrderTF tf;
    tf.gain = yaw_gain(params);
    tf.pole = with_damper ? -zeta_prime_yaw(params) / params.inertia_diag.z() : 0.0;
    if (tf.pole == 0.0) {
        tf.pole = 0.0;  // drop the sign of -0.0
    }
    return tf;
}

Vec3 yaw_damper_torque(const QuadParams& params, double yaw_rate) {
    QuadParams p = params;
    p.model.damper_model = DamperModel::Linear;
    State s;
    s.body_rates = Vec3(0.0, 0.0, yaw_rate);
    Vec3 tau = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const MotorIndex i(k + 1);
        tau += p.motor_origin(i).cross(p.motor_rotation(i) * total_delta_thrust(s, i, p));
    }
    return tau;
}

// ---------------------------------------------------------------------------
// Linearisation

namespace {

using Vector9 = Eigen::Matrix<double, 9, 1>;

struct Jacobians {
    Eigen::Matrix<double, 9, 9> a;
    Eigen::Matrix<double, 9, 4> b;
};

class HoverModel {
public:
    HoverModel(const QuadParams& params, const RotorSpeeds& trim) : params_(params), w0_(trim.array().square()) {}

    Vector9 operator()(const Vector9& x, const Eigen::Vector4d& w) const {
        State s;
        s.attitude = exp_so3(x.segment<3>(kRoll).eval());
        s.body_rates = x.segment<3>(kP);
        s.velocity = x.segment<3>(kVx);
        s.rotor_speeds = w.array().max(0.0).sqrt();
        Vector9 f;
        // d/dt of the body-frame attitude perturbation equals omega to first order
        f << s.body_rates, angular_acceleration(s, params_), translational_acceleration(s, params_);
        return f;
    }

    Jacobians central(double eps) const {
        Jacobians j;
        const Vector9 x0 = Vector9::Zero();
        double scale = std::max(1.0, params_.gravity);
        for (int c = 0; c < 9; ++c) {
            const double h = eps;
            Vector9 xp = x0;
            Vector9 xm = x0;
            xp(c) += h;
            xm(c) -= h;
            const Vector9 fp = (*this)(xp, w0_);
            const Vector9 fm = (*this)(xm, w0_);
            scale = std::max({scale, fp.cwiseAbs().maxCoeff(), fm.cwiseAbs().maxCoeff()});
            j.a.col(c) = (fp - fm) / (2.0 * h);
            snap(j.a.col(c), scale, h);
        }
        for (int c = 0; c < 4; ++c) {
            const double h = eps * std::max(1.0, std::abs(w0_(c)));
            Eigen::Vector4d wp = w0_;
            Eigen::Vector4d wm = w0_;
            wp(c) += h;
            wm(c) -= h;
            const Vector9 fp = (*this)(Vector9::Zero(), wp);
            const Vector9 fm = (*this)(Vector9::Zero(), wm);
            j.b.col(c) = (fp - fm) / (2.0 * h);
            snap(j.b.col(c), std::max({scale, fp.cwiseAbs().maxCoeff(), fm.cwiseAbs().maxCoeff()}), h);
        }
        return j;
    }

private:
    // Differences below the round-off floor of f(x+h) - f(x-h) carry no
    // information; zeroing them keeps exact structural zeros exact.
    template <typename Col>
    static void snap(Col&& col, double scale, double h) {
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale / h;
        for (Eigen::Index k = 0; k < col.size(); ++k) {
            if (std::abs(col(k)) < floor) {
                col(k) = 0.0;
            }
        }
    }

    const QuadParams& params_;
    Eigen::Vector4d w0_;
};

}  // namespace

LinearModel linearize_hover(const QuadParams& params, const LinearizeOptions& options) {
    if (!(options.eps > 0.0)) {
        throw InvalidArgument("stability", "linearization eps must be > 0");
    }
    QuadParams p = params;
    p.model.gyroscopic = options.gyroscopic;
    p.validate();

    LinearModel model;
    model.trim_speeds = solve_hover_trim(p).speeds;

    const HoverModel f(p, model.trim_speeds);
    const Jacobians fine = f.central(options.eps);
    const Jacobians half = f.central(0.5 * options.eps);
    model.state_matrix = fine.a;
    model.input_matrix = fine.b;
    model.convergence = (fine.a - half.a).cwiseAbs().maxCoeff();

    Eigen::EigenSolver<Eigen::Matrix<double, 9, 9>> solver(model.state_matrix, false);
    if (solver.info() != Eigen::Success) {
        throw Error("stability", "eigenvalue computation failed");
    }
    model.eigenvalues = solver.eigenvalues();
    return model;
}

ChannelPoles channel_poles(const LinearModel& model) {
    Eigen::EigenSolver<Eigen::Matrix3d> solver(model.rate_block(), true);
    if (solver.info() != Eigen::Success) {
        throw Error("stability", "eigenvalue computation failed");
    }
    const auto values = solver.eigenvalues();
    const auto vectors = solver.eigenvectors();

    auto weight = [&](int mode, int axis) { return std::abs(vectors(axis, mode)) / vectors.col(mode).norm(); };

    int yaw = 0;
    for (int m = 1; m < 3; ++m) {
        if (weight(m, 2) > weight(yaw, 2)) {
            yaw = m;
        }
    }
    int first = (yaw == 0) ? 1 : 0;
    int second = 3 - yaw - first;
    int roll = first;
    int pitch = second;
    const double wa = weight(first, 0);
    const double wb = weight(second, 0);
    if (std::abs(wa - wb) <= 1e-9) {
        // mixed roll/pitch modes: call the slower one "roll"
        if (values(second).real() > values(first).real()) {
            std::swap(roll, pitch);
        }
    } else if (wb > wa) {
        std::swap(roll, pitch);
    }
    return {values(roll), values(pitch), values(yaw)};
}

// ---------------------------------------------------------------------------
// Sweeps

std::optional<double> DSweepPoint::dominant_real() const {
    if (!roll_pole || !pitch_pole) {
        return std::nullopt;
    }
    return std::max(roll_pole->real(), pitch_pole->real());
}

std::vector<DSweepPoint> pole_sweep_d(const QuadParams& params, const std::vector<double>& d_values,
                                      const LinearizeOptions& options) {
    return parallel_map<DSweepPoint>(d_values.size(), [&](std::size_t k) {
        DSweepPoint point;
        point.d = d_values[k];
        try {
            QuadParams p = params;
            p.com_offset = d_values[k];
            const LinearModel model = linearize_hover(p, options);
            const ChannelPoles poles = channel_poles(model);
            point.roll_pole = poles.roll;
            point.pitch_pole = poles.pitch;
            point.trim_speeds = model.trim_speeds;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        return point;
    });
}

std::vector<AlphaSweepPoint> pole_sweep_alpha(const QuadParams& params, int preset_id,
                                              const std::vector<double>& alpha_values,
                                              const LinearizeOptions& options) {
    const ConfigPreset preset = ConfigPreset::from_id(preset_id);
    return parallel_map<AlphaSweepPoint>(alpha_values.size(), [&](std::size_t k) {
        AlphaSweepPoint point;
        point.alpha = alpha_values[k];
        try {
            const QuadParams p = apply_preset(params, preset, alpha_values[k], 0.0);
            const FirstOrderTF tf = yaw_transfer_function(p, p.model.dihedral_dampers);
            point.analytic_pole = tf.pole;
            point.gain = tf.gain;
            point.yaw_pole = channel_poles(linearize_hover(p, options)).yaw;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        return point;
    });
}

// ---------------------------------------------------------------------------
// Ranking

namespace {

bool close(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool ranks_before(const RankEntry& a, const RankEntry& b) {
    if (a.qualified != b.qualified) {
        return a.qualified;
    }
    if (!a.qualified) {
        return a.config_id < b.config_id;
    }
    if (!close(a.metric, b.metric)) {
        return a.metric < b.metric;
    }
    if (!close(a.channels.yaw.real(), b.channels.yaw.real())) {
        return a.channels.yaw.real() < b.channels.yaw.real();
    }
    if (!close(a.channels.roll.real(), b.channels.roll.real())) {
        return a.channels.roll.real() < b.channels.roll.real();
    }
    if (!close(std::abs(a.yaw_gain), std::abs(b.yaw_gain))) {
        return std::abs(a.yaw_gain) < std::abs(b.yaw_gain);
    }
    return a.config_id < b.config_id;
}

RankEntry evaluate_preset(int id, double base_alpha, double base_beta, const QuadParams& params,
                          const LinearizeOptions& options) {
    RankEntry entry;
    entry.config_id = id;
    try {
        const ConfigPreset preset = ConfigPreset::from_id(id);
        const QuadParams full = apply_preset(params, preset, base_alpha, base_beta);
        const QuadParams dihedral_only = apply_preset(params, preset, 0.0, base_beta);
        const QuadParams twist_only = apply_preset(params, preset, base_alpha, 0.0);

        const LinearModel full_model = linearize_hover(full, options);
        entry.trim_speeds = full_model.trim_speeds;
        entry.poles.assign(full_model.eigenvalues.begin(), full_model.eigenvalues.end());

        const ChannelPoles rp = channel_poles(linearize_hover(dihedral_only, options));
        const ChannelPoles yw = channel_poles(linearize_hover(twist_only, options));
        entry.channels = {rp.roll, rp.pitch, yw.yaw};
        entry.metric = std::min({rp.roll.real(), rp.pitch.real(), yw.yaw.real()});
        entry.yaw_gain = yaw_gain(twist_only);
        entry.maneuverability = -entry.metric + std::abs(entry.yaw_gain);
    } catch (const std::exception& e) {
        entry.qualified = false;
        entry.diagnostic = e.what();
    }
    return entry;
}

}  // namespace

std::vector<RankEntry> rank_configurations(double base_alpha, double base_beta, const QuadParams& params,
                                           const LinearizeOptions& options) {
    if (!(base_alpha > 0.0) || !(base_beta > 0.0)) {
        throw InvalidArgument("stability", "rank: base twist and dihedral magnitudes must be > 0");
    }
    if (base_alpha >= std::numbers::pi / 4 || base_beta >= std::numbers::pi / 4) {
        throw InvalidArgument("stability", "rank: base magnitudes must be below pi/4");
    }
    std::vector<RankEntry> entries = parallel_map<RankEntry>(ConfigPreset::kCount, [&](std::size_t k) {
        return evaluate_preset(static_cast<int>(k) + 1, base_alpha, base_beta, params, options);
    });
    // insertion sort: the tolerance-based comparison is not a strict weak order
    for (std::size_t i = 1; i < entries.size(); ++i) {
        for (std::size_t j = i; j > 0 && ranks_before(entries[j], entries[j - 1]); --j) {
            std::swap(entries[j], entries[j - 1]);
        }
    }
    return entries;
}

}  // namespace tiltquad
