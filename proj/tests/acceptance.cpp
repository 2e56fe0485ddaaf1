// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if
// any fails. Oracles live in oracles.hpp; nothing is tuned to the result.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "tiltquad/dynamics.hpp"
#include "tiltquad/presets.hpp"
#include "tiltquad/rotor.hpp"
#include "tiltquad/sim.hpp"
#include "tiltquad/stability.hpp"

using namespace tiltquad;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

QuadParams preset(int id, double a = 0.05, double b = 0.1) {
    return apply_preset(default_params(), ConfigPreset::from_id(id), a, b);
}

oracle::Geometry geometry(const QuadParams& p) {
    oracle::Geometry g;
    g.L = p.arm_length;
    g.d = p.com_offset;
    g.k_f = p.rotor.k_f;
    g.k_t = p.rotor.k_t;
    g.alpha = p.rotor.alpha;
    g.beta = p.rotor.beta;
    return g;
}

State spinning(const RotorSpeeds& w) {
    State s;
    s.rotor_speeds = w;
    return s;
}

Outcome flat_reduction() {
    QuadParams p = default_params();
    p.com_offset = 0.0;
    p.model.dihedral_dampers = false;
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1500.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const RotorSpeeds w(u(rng), u(rng), u(rng), u(rng));
        const Vec3 tau = control_torque(spinning(w), p);
        worst = std::max(worst, (tau - oracle::plus_mixer(geometry(p), w)).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-12, fmt::format("max |tau - mixer| = {:.3e} N m", worst)};
}

Outcome closed_form_torque() {
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1500.0);
    std::uniform_real_distribution<double> ang(-0.2, 0.2);
    std::uniform_real_distribution<double> off(-0.1, 0.1);
    double brute = 0.0;
    double library = 0.0;
    for (int k = 0; k < 1000; ++k) {
        QuadParams p = default_params();
        const double a = ang(rng);
        p.rotor.alpha = {a, -a, a, -a};
        p.com_offset = off(rng);
        p.model.dihedral_dampers = false;
        const RotorSpeeds w(u(rng), u(rng), u(rng), u(rng));
        const Vec3 closed = oracle::twist_closed_form(geometry(p), a, w);
        brute = std::max(brute, (oracle::torque_sum(geometry(p), w) - closed).cwiseAbs().maxCoeff());
        library = std::max(library, (control_torque(spinning(w), p) - closed).cwiseAbs().maxCoeff());
    }
    return {brute < 1e-12 && library < 1e-12,
            fmt::format("four-motor sum {:.3e}, control_torque {:.3e} N m", brute, library)};
}

Outcome yaw_torque_chain() {
    const QuadParams p = preset(3);
    const double a = 0.05;
    double worst = 0.0;
    for (double r : {0.1, 0.5, 1.0}) {
        State s;
        s.body_rates = Vec3(0, 0, r);
        Vec3 tau = Vec3::Zero();
        for (int i = 1; i <= 4; ++i) {
            const MotorIndex m(i);
            tau += p.motor_origin(m).cross(p.motor_rotation(m) * total_delta_thrust(s, m, p));
        }
        const Vec3 analytic(0, 0, -4 * p.blade.zeta_yaw * std::pow(p.arm_length * std::sin(a), 2) * r);
        worst = std::max(worst, (tau - analytic).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-12, fmt::format("max deviation {:.3e} N m", worst)};
}

Outcome yaw_pole_three_ways() {
    QuadParams p = preset(3);
    p.model.gyroscopic = false;
    const double analytic = yaw_transfer_function(p, true).pole;

    const ChannelPoles c = channel_poles(linearize_hover(p, {1e-6, false}));
    const double lin_err = std::abs(c.yaw.real() - analytic) / std::abs(analytic);

    Scenario sc;
    sc.params = p;
    sc.initial = hover_state(p);
    sc.initial.body_rates = Vec3(0, 0, 0.5);
    sc.schedule = RotorSchedule(sc.initial.rotor_speeds);
    sc.duration = 20.0;
    sc.dt = 0.001;
    const Trajectory tr = simulate(sc);
    std::vector<double> t;
    std::vector<double> r;
    for (std::size_t k = 0; k < tr.size(); k += 10) {
        t.push_back(tr.time[k]);
        r.push_back(tr.states[k].body_rates.z());
    }
    const double fitted = oracle::log_slope(t, r);
    const double fit_err = std::abs(fitted - analytic) / std::abs(analytic);
    return {lin_err < 1e-3 && fit_err < 0.05,
            fmt::format("analytic {:.6e}, linearised {:.6e} ({:.2e} rel), fitted {:.6e} ({:.2e} rel)", analytic,
                        c.yaw.real(), lin_err, fitted, fit_err)};
}

Outcome flat_yaw_marginal() {
    const QuadParams p = preset(4);
    Scenario sc;
    sc.params = p;
    sc.initial = hover_state(p);
    sc.initial.body_rates = Vec3(0, 0, 0.5);
    sc.schedule = RotorSchedule(sc.initial.rotor_speeds);
    sc.duration = 5.0;
    const Trajectory tr = simulate(sc);
    double worst = 0.0;
    for (const State& s : tr.states) {
        worst = std::max(worst, std::abs(std::abs(s.body_rates.z()) - 0.5));
    }
    return {worst < 1e-6, fmt::format("max ||r| - 0.5| = {:.3e} rad/s", worst)};
}

Outcome ranking() {
    const auto ranked = rank_configurations(0.05, 0.1, default_params());
    std::string order;
    bool ok = ranked.size() == 6;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        order += fmt::format("{}{}", k ? "," : "", ranked[k].config_id);
        ok = ok && ranked[k].config_id == static_cast<int>(k) + 1;
    }
    std::string metrics;
    for (const auto& e : ranked) {
        metrics += fmt::format(" {}:{:.6f}", e.config_id, e.metric);
    }
    return {ok, "order " + order + "; metric" + metrics};
}

Outcome d_monotonicity() {
    const auto pts = pole_sweep_d(preset(2), {-0.05, 0.0, 0.05, 0.10});
    bool ok = true;
    std::string values;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (!pts[k].roll_pole) {
            return {false, "d=" + std::to_string(pts[k].d) + ": " + pts[k].error};
        }
        values += fmt::format(" {:.6f}", pts[k].roll_pole->real());
        if (k > 0) {
            ok = ok && pts[k].roll_pole->real() < pts[k - 1].roll_pole->real();
        }
    }
    return {ok, "roll pole real parts" + values};
}

Outcome chirality() {
    const double t3 = yaw_damper_torque(preset(3), 1.0).z();
    const double t5 = yaw_damper_torque(preset(5), 1.0).z();
    const double torque_err = std::abs(t5 + t3);

    QuadParams p3 = preset(3);
    QuadParams p5 = preset(5);
    const double y3 = channel_poles(linearize_hover(p3)).yaw.real();
    const double y5 = channel_poles(linearize_hover(p5)).yaw.real();
    const double mirror_err = std::abs(y5 + y3) / std::abs(y3);
    return {torque_err < 1e-12 && mirror_err < 1e-3,
            fmt::format("yaw torque at r=1: config 3 {:.6e}, config 5 {:.6e} (|sum| {:.3e}); "
                        "yaw pole: config 3 {:.6e}, config 5 {:.6e}",
                        t3, t5, torque_err, y3, y5)};
}

Outcome numerics() {
    // observed order on a torque-free tumble (asymmetric body)
    QuadParams p = default_params();
    p.model.dihedral_dampers = false;
    p.gravity = 0.0;
    p.inertia_diag = Vec3(0.01, 0.015, 0.02);
    State s0;
    s0.body_rates = Vec3(1.0, 2.0, 3.0);
    const auto run = [&](double dt, double duration) {
        Scenario sc;
        sc.params = p;
        sc.initial = s0;
        sc.schedule = RotorSchedule(RotorSpeeds::Zero());
        sc.duration = duration;
        sc.dt = dt;
        sc.max_dt = 0.05;
        return simulate(sc);
    };
    const auto final_vec = [](const State& s) {
        Eigen::Matrix<double, 12, 1> v;
        v << s.body_rates, Eigen::Map<const Eigen::Matrix<double, 9, 1>>(s.attitude.data());
        return v;
    };
    const auto ref = final_vec(run(0.00125, 2.0).states.back());
    const double e1 = (final_vec(run(0.02, 2.0).states.back()) - ref).norm();
    const double e2 = (final_vec(run(0.01, 2.0).states.back()) - ref).norm();
    const double order = std::log2(e1 / e2);

    double ortho = 0.0;
    for (const State& s : run(0.001, 10.0).states) {
        ortho = std::max(ortho, (s.attitude.transpose() * s.attitude - Mat3::Identity()).norm());
    }

    double trim = 0.0;
    for (int id = 1; id <= 6; ++id) {
        const TrimResult t = solve_hover_trim(preset(id));
        trim = std::max({trim, t.force_residual, t.torque_residual});
    }

    QuadParams fall = default_params();
    fall.model.dihedral_dampers = false;
    Scenario sc;
    sc.params = fall;
    sc.initial.velocity = Vec3(1.0, -0.5, 3.0);
    sc.schedule = RotorSchedule(RotorSpeeds::Zero());
    sc.duration = 10.0;
    const Trajectory tr = simulate(sc);
    const auto energy = [&](const State& s) {
        return 0.5 * fall.mass * s.velocity.squaredNorm() + fall.mass * fall.gravity * s.position.z();
    };
    double drift = 0.0;
    for (const State& s : tr.states) {
        drift = std::max(drift, std::abs(energy(s) - energy(tr.states.front())));
    }

    return {order >= 3.9 && ortho < 1e-9 && trim < 1e-9 && drift < 1e-8,
            fmt::format("order {:.3f}, orthonormality {:.2e}, trim residual {:.2e}, energy drift {:.2e} J", order,
                        ortho, trim, drift)};
}

Outcome blade_integral() {
    const BladeAero blade;
    double worst = 0.0;
    for (double w : {300.0, 400.0, 500.0, 600.0, 700.0}) {
        for (double o : {-1.4, -0.7, 0.3, 0.7, 1.4}) {
            if (std::abs(o) / (w * blade.blade_radius) >= 0.05) {
                return {false, "grid point outside the small-angle regime"};
            }
            const double quad = delta_thrust_blade_integral(blade, o, w).z();
            const double closed = delta_thrust_blade(blade, o, w).z();
            worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
        }
    }
    return {worst < 0.01, fmt::format("max relative gap {:.3e}", worst)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "flat-quad reduction", 1.0, flat_reduction},
        {2, "closed-form torque equivalence", 1.0, closed_form_torque},
        {3, "yaw damper torque chain", 1.0, yaw_torque_chain},
        {4, "yaw pole three ways", 10.0, yaw_pole_three_ways},
        {5, "flat yaw is marginal", 5.0, flat_yaw_marginal},
        {6, "ranking reproduction", 30.0, ranking},
        {7, "d-monotonicity", 30.0, d_monotonicity},
        {8, "chirality sign rule", 5.0, chirality},
        {9, "numerics hygiene", 30.0, numerics},
        {10, "blade-integral consistency", 5.0, blade_integral},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s %2d %s: %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), elapsed, c.budget_s);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
