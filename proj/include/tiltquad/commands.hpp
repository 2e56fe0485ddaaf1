#pragma once

// The tiltquad commands: each maps onto one sim/stability operation and
// writes its artifacts to an output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tiltquad/config.hpp"

namespace tiltquad {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { Trim, Simulate, YawTf, Poles, Rank, SweepD, SweepAlpha };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command cmd);

/// Command-line overrides applied on top of the configuration file.
struct Overrides {
    std::optional<int> preset;
    std::optional<bool> dampers;
    std::optional<bool> gyro;  ///< simulation and linearisation alike
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Runs the command without touching the filesystem and returns its result
/// payload (the "result" member of the summary).
nlohmann::json evaluate_command(Command cmd, const RunConfig& config);

/// Runs the command, writes <command>.json, run_metadata.json and, for
/// simulate, trajectory.csv into out_dir, and prints a JSON summary to out.
/// Errors are reported on err with the originating module. Returns 0 only
/// when every artifact was written.
int run_command(Command cmd, const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err);

}  // namespace tiltquad
