#pragma once

// Fixed-step RK4 integration, hover trim and scenario execution.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tiltquad/error.hpp"
#include "tiltquad/model.hpp"

namespace tiltquad {

/// Raised when a simulation produces non-finite values or leaves the
/// rotation manifold.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double time)
        : Error("sim", what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class TrimFailure : public Error {
public:
    TrimFailure(const std::string& what, double force_residual, double torque_residual)
        : Error("sim", what + " (force residual " + std::to_string(force_residual) + " N, torque residual " +
                           std::to_string(torque_residual) + " N m)"),
          force_residual_(force_residual),
          torque_residual_(torque_residual) {}
    double force_residual() const noexcept { return force_residual_; }
    double torque_residual() const noexcept { return torque_residual_; }

private:
    double force_residual_;
    double torque_residual_;
};

/// Open-loop rotor speed command as a function of time.
class RotorSchedule {
public:
    enum class Interpolation { Hold, Linear };

    struct Point {
        double t;
        RotorSpeeds speeds;
    };

    RotorSchedule() = default;
    explicit RotorSchedule(const RotorSpeeds& constant);
    RotorSchedule(std::vector<Point> points, Interpolation interpolation);

    RotorSpeeds at(double t) const;
    /// Limit of at() from below; differs from at(t) only at a hold breakpoint.
    RotorSpeeds left_limit(double t) const;

    const std::vector<Point>& points() const { return points_; }
    Interpolation interpolation() const { return interpolation_; }
    /// First breakpoint time; the schedule holds its first value before it
    /// only when this is <= 0.
    double start() const { return points_.empty() ? 0.0 : points_.front().t; }

private:
    std::vector<Point> points_;
    Interpolation interpolation_ = Interpolation::Hold;
};

struct Scenario {
    QuadParams params;
    State initial;
    RotorSchedule schedule;
    double duration = 1.0;
    double dt = 0.001;
    double max_dt = 0.01;

    void validate() const;
};

struct Trajectory {
    std::vector<double> time;
    std::vector<State> states;
    std::vector<Vec3> torque;                     ///< body control torque at each sample
    std::vector<std::array<double, 4>> delta_thrust;  ///< dihedral thrust change per motor [N]

    std::size_t size() const { return time.size(); }
};

/// One RK4 step with the rotor command held constant over the step. The
/// attitude is re-orthonormalised afterwards.
State step(const State& state, const RotorSpeeds& cmd, const QuadParams& params, double dt, double max_dt = 0.01);

/// One RK4 step sampling the schedule at the stage times t, t + dt/2, t + dt.
/// The last stage takes the value just before t + dt, so a hold schedule
/// that switches on a step boundary is integrated exactly.
State step(const State& state, const RotorSchedule& schedule, double t, const QuadParams& params, double dt,
           double max_dt = 0.01);

struct TrimResult {
    RotorSpeeds speeds = RotorSpeeds::Zero();
    double force_residual = 0.0;   ///< |net force| at rest [N]
    double torque_residual = 0.0;  ///< |net torque| at rest [N m]
    int iterations = 0;
    bool closed_form = false;      ///< equal-speed solution accepted without iteration
};

/// Rotor speeds that hold the vehicle level and at rest. Equal speeds are
/// tried first; otherwise a damped Gauss-Newton iteration over the four
/// speeds drives the six force/torque residuals to zero.
TrimResult solve_hover_trim(const QuadParams& params);

inline RotorSpeeds hover_trim(const QuadParams& params) { return solve_hover_trim(params).speeds; }

/// Level, at-rest state spinning the rotors at the trim speeds.
State hover_state(const QuadParams& params);

Trajectory simulate(const Scenario& scenario);

/// Number of samples simulate() produces: ceil(duration/dt) + 1.
std::size_t sample_count(double duration, double dt);

/// CSV with header t,sx,sy,sz,vx,vy,vz,r11..r33,p,q,r,g1..g4 and values
/// printed with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace tiltquad
