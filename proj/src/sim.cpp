#include "tiltquad/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "tiltquad/dynamics.hpp"
#include "tiltquad/rotor.hpp"

namespace tiltquad {

// ---------------------------------------------------------------------------
// Schedule

RotorSchedule::RotorSchedule(const RotorSpeeds& constant) : points_{{0.0, constant}} {}

RotorSchedule::RotorSchedule(std::vector<Point> points, Interpolation interpolation)
    : points_(std::move(points)), interpolation_(interpolation) {
    if (points_.empty()) {
        throw InvalidArgument("sim", "rotor schedule needs at least one point");
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!std::isfinite(points_[k].t) || !points_[k].speeds.allFinite()) {
            throw InvalidArgument("sim", "rotor schedule entries must be finite");
        }
        if (k > 0 && !(points_[k].t > points_[k - 1].t)) {
            throw InvalidArgument("sim", "rotor schedule times must be strictly increasing");
        }
    }
}

RotorSpeeds RotorSchedule::at(double t) const {
    if (points_.empty()) {
        throw InvalidArgument("sim", "empty rotor schedule");
    }
    if (t <= points_.front().t) {
        return points_.front().speeds;
    }
    if (t >= points_.back().t) {
        return points_.back().speeds;
    }
    // first point with time > t
    const auto upper = std::upper_bound(points_.begin(), points_.end(), t,
                                        [](double value, const Point& p) { return value < p.t; });
    const auto lower = upper - 1;
    if (interpolation_ == Interpolation::Hold) {
        return lower->speeds;
    }
    const double w = (t - lower->t) / (upper->t - lower->t);
    return (1.0 - w) * lower->speeds + w * upper->speeds;
}

RotorSpeeds RotorSchedule::left_limit(double t) const {
    if (interpolation_ == Interpolation::Linear || points_.empty() || t <= points_.front().t) {
        return at(t);
    }
    // last point strictly before t
    const auto lower = std::lower_bound(points_.begin(), points_.end(), t,
                                        [](const Point& p, double value) { return p.t < value; });
    return (lower - 1)->speeds;
}

void Scenario::validate() const {
    params.validate();
    validate_state(initial, params);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("sim", "dt must be > 0");
    }
    if (dt > max_dt) {
        throw InvalidArgument("sim", "dt exceeds the step cap max_dt");
    }
    if (!(duration >= dt) || !std::isfinite(duration)) {
        throw InvalidArgument("sim", "duration must be >= dt");
    }
    if (schedule.points().empty()) {
        throw InvalidArgument("sim", "scenario has no rotor schedule");
    }
    if (schedule.start() > 0.0) {
        throw InvalidArgument("sim", "rotor schedule must start at or before t=0");
    }
    if (schedule.interpolation() == RotorSchedule::Interpolation::Linear && schedule.points().size() > 1 &&
        schedule.points().back().t < duration) {
        throw InvalidArgument("sim", "interpolated rotor schedule must cover the whole duration");
    }
}

// ---------------------------------------------------------------------------
// Integration

namespace {

State advance(const State& s, const StateDerivative& d, double h) {
    State out = s;
    out.position += h * d.position;
    out.velocity += h * d.velocity;
    out.attitude += h * d.attitude;
    out.body_rates += h * d.body_rates;
    return out;
}

// c1 is the command just before t0 + dt; `after` is stored in the new state.
template <typename CommandAt>
State rk4(const State& state, CommandAt&& command_at, const RotorSpeeds& after, const QuadParams& params, double t0,
          double dt, double max_dt) {
    if (!(dt > 0.0) || dt > max_dt) {
        throw InvalidArgument("sim", "step: dt must be in (0, max_dt]");
    }
    const RotorSpeeds c0 = command_at(0.0);
    const RotorSpeeds ch = command_at(0.5 * dt);
    const RotorSpeeds c1 = command_at(dt);

    const StateDerivative k1 = state_derivative(state, c0, params);
    const StateDerivative k2 = state_derivative(advance(state, k1, 0.5 * dt), ch, params);
    const StateDerivative k3 = state_derivative(advance(state, k2, 0.5 * dt), ch, params);
    const StateDerivative k4 = state_derivative(advance(state, k3, dt), c1, params);

    State next = state;
    const double w = dt / 6.0;
    next.position += w * (k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position);
    next.velocity += w * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
    next.attitude += w * (k1.attitude + 2.0 * k2.attitude + 2.0 * k3.attitude + k4.attitude);
    next.body_rates += w * (k1.body_rates + 2.0 * k2.body_rates + 2.0 * k3.body_rates + k4.body_rates);
    next.rotor_speeds = after;

    if (!next.all_finite()) {
        throw DivergenceError("non-finite state after RK4 step", t0 + dt);
    }
    try {
        next.attitude = orthonormalize(next.attitude);
    } catch (const Error& e) {
        throw DivergenceError(std::string("attitude left the rotation group: ") + e.what(), t0 + dt);
    }
    return next;
}

}  // namespace

State step(const State& state, const RotorSpeeds& cmd, const QuadParams& params, double dt, double max_dt) {
    return rk4(state, [&](double) { return cmd; }, cmd, params, 0.0, dt, max_dt);
}

State step(const State& state, const RotorSchedule& schedule, double t, const QuadParams& params, double dt,
           double max_dt) {
    const auto command_at = [&](double offset) {
        return offset < dt ? schedule.at(t + offset) : schedule.left_limit(t + dt);
    };
    return rk4(state, command_at, schedule.at(t + dt), params, t, dt, max_dt);
}

// ---------------------------------------------------------------------------
// Trim

namespace {

struct TrimResidual {
    Eigen::Matrix<double, 6, 1> value;
    double force = 0.0;
    double torque = 0.0;
};

TrimResidual trim_residual(const QuadParams& params, const RotorSpeeds& speeds) {
    State rest;
    rest.rotor_speeds = speeds;
    TrimResidual r;
    const Vec3 force = body_force(rest, params) + params.mass * params.gravity_vector();
    const Vec3 torque = control_torque(rest, params);
    r.value << force, torque;
    r.force = force.norm();
    r.torque = torque.norm();
    return r;
}

Eigen::Matrix<double, 6, 4> trim_jacobian(const QuadParams& params, const RotorSpeeds& speeds) {
    Eigen::Matrix<double, 6, 4> j;
    for (int k = 0; k < 4; ++k) {
        const MotorIndex i(k + 1);
        const Vec3 axis = params.motor_rotation(i).col(2);
        const Vec3 dtorque = params.motor_origin(i).cross(axis) + params.rotor.spin_sign[k] * params.rotor.k_t * axis;
        const double scale = 2.0 * params.rotor.k_f * speeds(k);
        j.col(k) << scale * axis, scale * dtorque;
    }
    return j;
}

constexpr double kTrimTolerance = 1e-10;
constexpr int kTrimMaxIterations = 50;

}  // namespace

TrimResult solve_hover_trim(const QuadParams& params) {
    params.validate();
    const double weight = params.mass * params.gravity;
    const double k_f = params.rotor.k_f;

    TrimResult result;

    double vertical = 0.0;
    for (int k = 0; k < 4; ++k) {
        vertical += params.motor_rotation(MotorIndex(k + 1))(2, 2);
    }
    if (vertical > 0.0) {
        const RotorSpeeds equal = RotorSpeeds::Constant(std::sqrt(weight / (k_f * vertical)));
        const TrimResidual r = trim_residual(params, equal);
        if (r.value.norm() < kTrimTolerance) {
            result.speeds = equal;
            result.force_residual = r.force;
            result.torque_residual = r.torque;
            result.closed_form = true;
            return result;
        }
    }

    RotorSpeeds speeds = RotorSpeeds::Constant(std::sqrt(weight / (4.0 * k_f)));
    TrimResidual r = trim_residual(params, speeds);
    int it = 0;
    for (; it < kTrimMaxIterations && r.value.norm() >= kTrimTolerance; ++it) {
        const Eigen::Matrix<double, 6, 4> j = trim_jacobian(params, speeds);
        const RotorSpeeds delta = j.colPivHouseholderQr().solve(-r.value);
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            const RotorSpeeds candidate = speeds + lambda * delta;
            const TrimResidual rc = trim_residual(params, candidate);
            if ((candidate.array() > 0.0).all() && rc.value.norm() < r.value.norm()) {
                speeds = candidate;
                r = rc;
                improved = true;
                break;
            }
        }
        if (!improved) {
            break;
        }
    }
    result.speeds = speeds;
    result.force_residual = r.force;
    result.torque_residual = r.torque;
    result.iterations = it;
    if (r.value.norm() >= kTrimTolerance) {
        throw TrimFailure("hover trim did not converge", r.force, r.torque);
    }
    if ((speeds.array().abs() > params.rotor.max_speed).any()) {
        throw TrimFailure("hover trim requires rotor speeds above max_speed", r.force, r.torque);
    }
    return result;
}

State hover_state(const QuadParams& params) {
    State s;
    s.rotor_speeds = hover_trim(params);
    return s;
}

// ---------------------------------------------------------------------------
// Scenario

std::size_t sample_count(double duration, double dt) {
    return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)) + 1;
}

namespace {

void record(Trajectory& traj, double t, const State& s, const QuadParams& params) {
    traj.time.push_back(t);
    traj.states.push_back(s);
    traj.torque.push_back(control_torque(s, params));
    std::array<double, 4> df{};
    if (params.model.dihedral_dampers) {
        for (int k = 0; k < 4; ++k) {
            df[k] = total_delta_thrust(s, MotorIndex(k + 1), params).z();
        }
    }
    traj.delta_thrust.push_back(df);
}

}  // namespace

Trajectory simulate(const Scenario& scenario) {
    scenario.validate();
    const std::size_t n = sample_count(scenario.duration, scenario.dt);

    Trajectory traj;
    traj.time.reserve(n);
    traj.states.reserve(n);

    State s = scenario.initial;
    s.rotor_speeds = scenario.schedule.at(0.0);
    record(traj, 0.0, s, scenario.params);
    for (std::size_t k = 1; k < n; ++k) {
        const double t0 = static_cast<double>(k - 1) * scenario.dt;
        try {
            s = step(s, scenario.schedule, t0, scenario.params, scenario.dt, scenario.max_dt);
        } catch (const DivergenceError&) {
            throw;
        } catch (const ModelValidityError& e) {
            throw ModelValidityError(e.module(), std::string(e.what()) + " (at t=" + std::to_string(t0) + ")");
        } catch (const Error& e) {
            throw Error(e.module(), std::string(e.what()) + " (at t=" + std::to_string(t0) + ")");
        }
        record(traj, static_cast<double>(k) * scenario.dt, s, scenario.params);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,sx,sy,sz,vx,vy,vz,r11,r12,r13,r21,r22,r23,r31,r32,r33,p,q,r,g1,g2,g3,g4\n";
    fmt::memory_buffer buf;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const State& s = trajectory.states[k];
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{:.17g}", trajectory.time[k]);
        const auto put = [&](double v) { fmt::format_to(std::back_inserter(buf), ",{:.17g}", v); };
        for (int j = 0; j < 3; ++j) put(s.position(j));
        for (int j = 0; j < 3; ++j) put(s.velocity(j));
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) put(s.attitude(r, c));
        }
        for (int j = 0; j < 3; ++j) put(s.body_rates(j));
        for (int j = 0; j < 4; ++j) put(s.rotor_speeds(j));
        buf.push_back('\n');
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

}  // namespace tiltquad
