// tiltquad <command> [--config file] [--out dir] [--preset N] [--dampers on|off] [--gyro on|off]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tiltquad/commands.hpp"

namespace {

std::optional<bool> on_off(const std::string& value) {
    if (value.empty()) {
        return std::nullopt;
    }
    return value == "on";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tilted-rotor quadcopter simulator and stability analyzer"};
    app.set_version_flag("--version", std::string(tiltquad::kToolVersion));

    std::string command;
    std::string config_path;
    std::string out_dir = "tiltquad_out";
    int preset = 0;
    std::string dampers;
    std::string gyro;

    app.add_option("command", command, "trim | simulate | yaw-tf | poles | rank | sweep-d | sweep-alpha")
        ->required()
        ->check(CLI::IsMember({"trim", "simulate", "yaw-tf", "poles", "rank", "sweep-d", "sweep-alpha"}));
    app.add_option("--config", config_path, "JSON configuration file (built-in defaults when omitted)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--preset", preset, "tilt configuration 1..6")->check(CLI::Range(1, 6));
    app.add_option("--dampers", dampers, "dihedral dampers")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--gyro", gyro, "propeller gyroscopic coupling")->check(CLI::IsMember({"on", "off"}));

    CLI11_PARSE(app, argc, argv);

    const auto cmd = tiltquad::parse_command(command);
    tiltquad::RunConfig config;
    try {
        config = config_path.empty() ? tiltquad::default_run_config() : tiltquad::load_config(config_path);
        tiltquad::Overrides overrides;
        if (preset != 0) {
            overrides.preset = preset;
        }
        overrides.dampers = on_off(dampers);
        overrides.gyro = on_off(gyro);
        tiltquad::apply_overrides(config, overrides);
    } catch (const tiltquad::Error& e) {
        std::cerr << "tiltquad " << command << ": error in " << e.module() << ": " << e.what() << "\n";
        const nlohmann::json summary = {
            {"command", command}, {"status", "error"}, {"module", e.module()}, {"message", e.what()}};
        std::cout << summary.dump(2) << "\n";
        return 2;
    }
    return tiltquad::run_command(*cmd, config, out_dir, std::cout, std::cerr);
}
