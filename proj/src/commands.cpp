#include "tiltquad/commands.hpp"

#include <array>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tiltquad/presets.hpp"
#include "tiltquad/sim.hpp"
#include "tiltquad/stability.hpp"

namespace tiltquad {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::Trim, "trim"},
    {Command::Simulate, "simulate"},
    {Command::YawTf, "yaw-tf"},
    {Command::Poles, "poles"},
    {Command::Rank, "rank"},
    {Command::SweepD, "sweep-d"},
    {Command::SweepAlpha, "sweep-alpha"},
}};

json complex_json(const std::complex<double>& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json optional_complex(const std::optional<std::complex<double>>& z) { return z ? complex_json(*z) : json(nullptr); }

json speeds_json(const RotorSpeeds& w) { return json::array({w(0), w(1), w(2), w(3)}); }

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json channels_json(const ChannelPoles& c) {
    return {{"roll", complex_json(c.roll)}, {"pitch", complex_json(c.pitch)}, {"yaw", complex_json(c.yaw)}};
}

template <typename Range>
json poles_json(const Range& poles) {
    json out = json::array();
    for (const auto& z : poles) {
        out.push_back(complex_json(z));
    }
    return out;
}

int config_id(const RunConfig& config) { return config.preset.value_or(0); }

LinearizeOptions linearize_options(const RunConfig& config) {
    LinearizeOptions o;
    o.eps = config.analysis.eps;
    o.gyroscopic = config.analysis.gyroscopic;
    return o;
}

struct Outcome {
    json result;
    std::string csv;  ///< trajectory, simulate only
};

Outcome run_trim(const RunConfig& config) {
    const TrimResult t = solve_hover_trim(config.params);
    return {{
                {"config_id", config_id(config)},
                {"trim_speeds", speeds_json(t.speeds)},
                {"force_residual", t.force_residual},
                {"torque_residual", t.torque_residual},
                {"iterations", t.iterations},
                {"closed_form", t.closed_form},
            },
            {}};
}

Outcome run_simulate(const RunConfig& config) {
    const Scenario scenario = make_scenario(config);
    const Trajectory traj = simulate(scenario);
    double orthonormality = 0.0;
    for (const State& s : traj.states) {
        orthonormality = std::max(orthonormality, (s.attitude.transpose() * s.attitude - Mat3::Identity()).norm());
    }
    const State& last = traj.states.back();
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    json final_state = {
        {"t", traj.time.back()},
        {"position", vec_json(last.position)},
        {"velocity", vec_json(last.velocity)},
        {"body_rates", vec_json(last.body_rates)},
        {"rotor_speeds", speeds_json(last.rotor_speeds)},
    };
    return {{
                {"config_id", config_id(config)},
                {"samples", traj.size()},
                {"initial_rotor_speeds", speeds_json(scenario.initial.rotor_speeds)},
                {"final", final_state},
                {"max_orthonormality_error", orthonormality},
            },
            csv.str()};
}

Outcome run_yaw_tf(const RunConfig& config) {
    const bool damper = config.params.model.dihedral_dampers;
    const FirstOrderTF tf = yaw_transfer_function(config.params, damper);
    return {{
                {"config_id", config_id(config)},
                {"gain", tf.gain},
                {"pole", tf.pole},
                {"with_damper", damper},
                {"zeta_prime", zeta_prime_yaw(config.params)},
                {"unstable", tf.unstable()},
                {"marginal", tf.marginal()},
            },
            {}};
}

Outcome run_poles(const RunConfig& config) {
    const LinearModel model = linearize_hover(config.params, linearize_options(config));
    const ChannelPoles channels = channel_poles(model);
    json a = json::array();
    for (int r = 0; r < 9; ++r) {
        json row = json::array();
        for (int c = 0; c < 9; ++c) {
            row.push_back(model.state_matrix(r, c));
        }
        a.push_back(row);
    }
    return {{
                {"config_id", config_id(config)},
                {"poles", poles_json(model.eigenvalues)},
                {"metric", std::min({channels.roll.real(), channels.pitch.real(), channels.yaw.real()})},
                {"trim_speeds", speeds_json(model.trim_speeds)},
                {"channel_poles", channels_json(channels)},
                {"convergence", model.convergence},
                {"state_matrix", a},
            },
            {}};
}

Outcome run_rank(const RunConfig& config) {
    const auto entries =
        rank_configurations(config.magnitude_alpha, config.magnitude_beta, config.params, linearize_options(config));
    json order = json::array();
    json records = json::array();
    for (const RankEntry& e : entries) {
        order.push_back(e.config_id);
        json rec = {
            {"config_id", e.config_id},
            {"qualified", e.qualified},
        };
        if (e.qualified) {
            rec["poles"] = poles_json(e.poles);
            rec["metric"] = e.metric;
            rec["trim_speeds"] = speeds_json(e.trim_speeds);
            rec["channel_poles"] = channels_json(e.channels);
            rec["yaw_gain"] = e.yaw_gain;
            rec["maneuverability"] = e.maneuverability;
        } else {
            rec["diagnostic"] = e.diagnostic;
        }
        records.push_back(rec);
    }
    return {{{"order", order}, {"records", records}}, {}};
}

Outcome run_sweep_d(const RunConfig& config) {
    const auto points = pole_sweep_d(config.params, config.analysis.d_values, linearize_options(config));
    json out = json::array();
    bool decreasing = true;
    std::optional<double> previous;
    for (const DSweepPoint& p : points) {
        const auto dominant = p.dominant_real();
        json rec = {
            {"d", p.d},
            {"roll_pole", optional_complex(p.roll_pole)},
            {"pitch_pole", optional_complex(p.pitch_pole)},
            {"dominant_real", dominant ? json(*dominant) : json(nullptr)},
            {"trim_speeds", speeds_json(p.trim_speeds)},
        };
        if (!p.error.empty()) {
            rec["error"] = p.error;
        }
        out.push_back(rec);
        const auto roll = p.roll_pole ? std::optional<double>(p.roll_pole->real()) : std::nullopt;
        if (!roll || (previous && !(*roll < *previous))) {
            decreasing = false;
        }
        previous = roll;
    }
    return {{{"config_id", config_id(config)}, {"points", out}, {"roll_strictly_decreasing", decreasing}}, {}};
}

Outcome run_sweep_alpha(const RunConfig& config) {
    const int preset = config.analysis.sweep_preset;
    const auto points =
        pole_sweep_alpha(config.params, preset, config.analysis.alpha_values, linearize_options(config));
    json out = json::array();
    for (const AlphaSweepPoint& p : points) {
        json rec = {
            {"alpha", p.alpha},
            {"yaw_pole", optional_complex(p.yaw_pole)},
            {"analytic_pole", p.analytic_pole},
            {"gain", p.gain},
        };
        if (!p.error.empty()) {
            rec["error"] = p.error;
        }
        out.push_back(rec);
    }
    return {{{"config_id", preset}, {"points", out}}, {}};
}

Outcome dispatch(Command cmd, const RunConfig& config) {
    switch (cmd) {
        case Command::Trim: return run_trim(config);
        case Command::Simulate: return run_simulate(config);
        case Command::YawTf: return run_yaw_tf(config);
        case Command::Poles: return run_poles(config);
        case Command::Rank: return run_rank(config);
        case Command::SweepD: return run_sweep_d(config);
        case Command::SweepAlpha: return run_sweep_alpha(config);
    }
    throw InvalidArgument("cli", "unknown command");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    f.close();
    if (!f) {
        throw Error("cli", "cannot write " + path.string());
    }
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [cmd, n] : kCommands) {
        if (n == name) {
            return cmd;
        }
    }
    return std::nullopt;
}

std::string_view command_name(Command cmd) {
    for (const auto& [c, n] : kCommands) {
        if (c == cmd) {
            return n;
        }
    }
    return "unknown";
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
    if (overrides.preset) {
        set_preset(config, *overrides.preset);
    }
    if (overrides.dampers) {
        config.params.model.dihedral_dampers = *overrides.dampers;
    }
    if (overrides.gyro) {
        config.params.model.gyroscopic = *overrides.gyro;
        config.analysis.gyroscopic = *overrides.gyro;
    }
    validate(config);
}

json evaluate_command(Command cmd, const RunConfig& config) { return dispatch(cmd, config).result; }

int run_command(Command cmd, const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err) {
    const std::string name(command_name(cmd));
    const auto start = std::chrono::steady_clock::now();
    try {
        validate(config);
        Outcome outcome = dispatch(cmd, config);
        const json resolved = to_json(config);

        std::filesystem::create_directories(out_dir);
        json artifacts = json::array();
        if (cmd == Command::Simulate) {
            write_file(out_dir / "trajectory.csv", outcome.csv);
            artifacts.push_back("trajectory.csv");
        }
        const json report = {{"command", name}, {"result", outcome.result}, {"config", resolved}};
        write_file(out_dir / (name + ".json"), report.dump(2) + "\n");
        artifacts.push_back(name + ".json");
        artifacts.push_back("run_metadata.json");

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const json metadata = {
            {"tool", "tiltquad"},
            {"version", std::string(kToolVersion)},
            {"command", name},
            {"source", config.source_path},
            {"config", resolved},
            {"artifacts", artifacts},
            {"wall_time_s", wall},
        };
        write_file(out_dir / "run_metadata.json", metadata.dump(2) + "\n");

        const json summary = {
            {"command", name},
            {"status", "ok"},
            {"artifacts", artifacts},
            {"result", outcome.result},
            {"config", resolved},
        };
        out << summary.dump(2) << "\n";
        return 0;
    } catch (const Error& e) {
        err << "tiltquad " << name << ": error in " << e.module() << ": " << e.what() << "\n";
        out << json{{"command", name}, {"status", "error"}, {"module", e.module()}, {"message", e.what()}}.dump(2)
            << "\n";
    } catch (const std::exception& e) {
        err << "tiltquad " << name << ": error: " << e.what() << "\n";
        out << json{{"command", name}, {"status", "error"}, {"module", "cli"}, {"message", e.what()}}.dump(2) << "\n";
    }
    return 1;
}

}  // namespace tiltquad
