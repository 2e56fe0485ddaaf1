#pragma once

// JSON run configuration: parsing, defaults, validation and the resolved
// form embedded in every output.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tiltquad/error.hpp"
#include "tiltquad/model.hpp"
#include "tiltquad/sim.hpp"

namespace tiltquad {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("cli", what) {}
};

/// Reported line/column of a malformed document.
class ConfigParseError : public ConfigError {
public:
    ConfigParseError(const std::string& what, std::size_t line, std::size_t column)
        : ConfigError(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct ScheduleSpec {
    enum class Mode { Trim, Table };
    Mode mode = Mode::Trim;
    RotorSchedule::Interpolation interpolation = RotorSchedule::Interpolation::Hold;
    std::vector<RotorSchedule::Point> points;
};

struct ScenarioSpec {
    double duration = 1.0;
    double dt = 0.001;
    double max_dt = 0.01;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec3 attitude_rpy = Vec3::Zero();  ///< R = Rz(yaw) Ry(pitch) Rx(roll)
    Vec3 body_rates = Vec3::Zero();
    ScheduleSpec schedule;
};

struct AnalysisOptions {
    double eps = 1e-6;
    bool gyroscopic = false;  ///< gyroscopic coupling in linearisations
    std::vector<double> d_values{-0.05, 0.0, 0.05, 0.10};
    std::vector<double> alpha_values{0.02, 0.05, 0.1, 0.2};
    int sweep_preset = 3;
};

struct RunConfig {
    int schema_version = 1;
    std::string source_path;  ///< empty for built-in defaults
    QuadParams params;
    /// Preset the mounting angles were taken from, if any. Kept so the
    /// resolved config reproduces the same config_id.
    std::optional<int> preset;
    /// Twist and dihedral magnitudes used by presets and by rank.
    double magnitude_alpha = 0.05;
    double magnitude_beta = 0.1;
    ScenarioSpec scenario;
    AnalysisOptions analysis;
};

inline constexpr int kSchemaVersion = 1;

/// Built-in configuration: default_params() and default options.
RunConfig default_run_config();

/// Parses and validates a configuration document. Unspecified fields take
/// the documented defaults (alpha = beta = d = 0, zeta = 0.1, ...).
/// Throws ConfigParseError for malformed JSON and ConfigError for unknown
/// keys, wrong types and out-of-range values.
RunConfig parse_config(const std::string& text, const std::string& source_path = {});

RunConfig load_config(const std::string& path);

/// Replaces the mounting angles with those of preset id (1..6).
void set_preset(RunConfig& config, int id);

/// Checks the whole configuration; throws ConfigError naming the field.
void validate(const RunConfig& config);

/// Fully resolved configuration in the input schema (radians, every field
/// explicit). Parsing it yields an identical RunConfig.
nlohmann::json to_json(const RunConfig& config);

/// Scenario ready for simulate(); a trim schedule is solved here.
Scenario make_scenario(const RunConfig& config);

}  // namespace tiltquad
