#include "tiltquad/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "tiltquad/presets.hpp"

namespace tiltquad {

using nlohmann::json;

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

/// Reads the keys of one JSON object, remembering which were consumed so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const json* node, std::string path, bool degrees) : node_(node), path_(std::move(path)), degrees_(degrees) {
        if (node_ && !node_->is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    bool has(const std::string& key) const { return node_ && node_->contains(key); }

    const json* child(const std::string& key) {
        if (!has(key)) {
            return nullptr;
        }
        seen_.insert(key);
        return &node_->at(key);
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void number(const std::string& key, double& out) {
        if (const json* v = child(key)) {
            out = as_number(*v, path(key));
        }
    }

    void angle(const std::string& key, double& out) {
        if (const json* v = child(key)) {
            out = as_number(*v, path(key)) * (degrees_ ? kDegree : 1.0);
        }
    }

    void integer(const std::string& key, int& out) {
        if (const json* v = child(key)) {
            if (!v->is_number_integer()) {
                throw ConfigError(path(key) + ": expected an integer");
            }
            out = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = child(key)) {
            if (!v->is_boolean()) {
                throw ConfigError(path(key) + ": expected true or false");
            }
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = child(key)) {
            if (!v->is_string()) {
                throw ConfigError(path(key) + ": expected a string");
            }
            out = v->get<std::string>();
        }
    }

    template <std::size_t N>
    void numbers(const std::string& key, std::array<double, N>& out, bool angles = false) {
        if (const json* v = child(key)) {
            const std::vector<double> values = as_numbers(*v, path(key), N);
            for (std::size_t k = 0; k < N; ++k) {
                out[k] = values[k] * (angles && degrees_ ? kDegree : 1.0);
            }
        }
    }

    void vec3(const std::string& key, Vec3& out, bool angles = false) {
        std::array<double, 3> a{out.x(), out.y(), out.z()};
        numbers(key, a, angles);
        out = Vec3(a[0], a[1], a[2]);
    }

    void list(const std::string& key, std::vector<double>& out, bool angles = false) {
        if (const json* v = child(key)) {
            out = as_numbers(*v, path(key), 0);
            if (angles && degrees_) {
                for (double& x : out) {
                    x *= kDegree;
                }
            }
        }
    }

    /// Rejects any key that was not read.
    void finish() const {
        if (!node_) {
            return;
        }
        for (const auto& item : node_->items()) {
            if (!seen_.count(item.key())) {
                throw ConfigError("unknown key '" + join(path_, item.key()) + "'");
            }
        }
    }

    static double as_number(const json& v, const std::string& where) {
        if (!v.is_number()) {
            throw ConfigError(where + ": expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            throw ConfigError(where + ": must be finite");
        }
        return x;
    }

    /// size 0 accepts any length
    static std::vector<double> as_numbers(const json& v, const std::string& where, std::size_t size) {
        if (!v.is_array() || (size > 0 && v.size() != size)) {
            throw ConfigError(where + ": expected an array of " + (size ? std::to_string(size) + " " : "") +
                              "numbers");
        }
        std::vector<double> out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            out.push_back(as_number(v[k], where + "[" + std::to_string(k) + "]"));
        }
        return out;
    }

private:
    const json* node_;
    std::string path_;
    bool degrees_;
    std::set<std::string> seen_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

const char* damper_model_name(DamperModel m) { return m == DamperModel::Linear ? "linear" : "blade_element"; }

void read_params(Section& s, QuadParams& p) {
    s.number("mass", p.mass);
    s.vec3("inertia", p.inertia_diag);
    s.number("prop_inertia", p.prop_inertia);
    s.number("arm_length", p.arm_length);
    s.number("com_offset", p.com_offset);
    s.number("gravity", p.gravity);
    s.boolean("gyroscopic", p.model.gyroscopic);
    s.finish();
}

void read_rotor(Section& s, RunConfig& cfg) {
    RotorConfig& r = cfg.params.rotor;
    s.number("k_f", r.k_f);
    s.number("k_t", r.k_t);
    s.numbers("alpha", r.alpha, true);
    s.numbers("beta", r.beta, true);
    if (const json* v = s.child("spin_sign")) {
        if (!v->is_array() || v->size() != 4) {
            throw ConfigError(s.path("spin_sign") + ": expected an array of 4 integers");
        }
        for (std::size_t k = 0; k < 4; ++k) {
            if (!(*v)[k].is_number_integer()) {
                throw ConfigError(s.path("spin_sign") + ": expected an array of 4 integers");
            }
            r.spin_sign[k] = (*v)[k].get<int>();
        }
    }
    s.angle("azimuth_offset", r.azimuth_offset);
    s.number("max_speed", r.max_speed);
    s.angle("magnitude_alpha", cfg.magnitude_alpha);
    s.angle("magnitude_beta", cfg.magnitude_beta);
    if (s.has("preset")) {
        if (s.has("alpha") || s.has("beta")) {
            throw ConfigError(s.path("preset") + ": cannot be combined with explicit alpha or beta");
        }
        int id = 0;
        s.integer("preset", id);
        cfg.preset = id;
    }
    s.finish();
}

void read_blade(Section& s, QuadParams& p) {
    BladeAero& b = p.blade;
    s.number("rho", b.rho);
    s.number("sigma", b.sigma);
    s.number("chord", b.chord);
    s.number("blade_radius", b.blade_radius);
    if (s.has("zeta")) {
        double z = 0.0;
        s.number("zeta", z);
        b.zeta_roll = b.zeta_pitch = b.zeta_yaw = z;
    }
    s.number("zeta_roll", b.zeta_roll);
    s.number("zeta_pitch", b.zeta_pitch);
    s.number("zeta_yaw", b.zeta_yaw);
    s.boolean("dampers", p.model.dihedral_dampers);
    s.boolean("translational", p.model.translational_dihedral);
    std::string model = damper_model_name(p.model.damper_model);
    s.string("damper_model", model);
    if (model == "linear") {
        p.model.damper_model = DamperModel::Linear;
    } else if (model == "blade_element") {
        p.model.damper_model = DamperModel::BladeElement;
    } else {
        throw ConfigError(s.path("damper_model") + ": must be \"linear\" or \"blade_element\"");
    }
    s.finish();
}

void read_schedule(Section& s, ScheduleSpec& spec) {
    std::string mode = "trim";
    s.string("mode", mode);
    if (mode == "trim") {
        spec.mode = ScheduleSpec::Mode::Trim;
    } else if (mode == "table") {
        spec.mode = ScheduleSpec::Mode::Table;
    } else {
        throw ConfigError(s.path("mode") + ": must be \"trim\" or \"table\"");
    }
    std::string interp = spec.interpolation == RotorSchedule::Interpolation::Hold ? "hold" : "linear";
    s.string("interpolation", interp);
    if (interp == "hold") {
        spec.interpolation = RotorSchedule::Interpolation::Hold;
    } else if (interp == "linear") {
        spec.interpolation = RotorSchedule::Interpolation::Linear;
    } else {
        throw ConfigError(s.path("interpolation") + ": must be \"hold\" or \"linear\"");
    }
    if (const json* pts = s.child("points")) {
        if (!pts->is_array()) {
            throw ConfigError(s.path("points") + ": expected an array");
        }
        spec.points.clear();
        for (std::size_t k = 0; k < pts->size(); ++k) {
            Section p(&(*pts)[k], s.path("points") + "[" + std::to_string(k) + "]", false);
            RotorSchedule::Point point{0.0, RotorSpeeds::Zero()};
            p.number("t", point.t);
            std::array<double, 4> w{};
            if (!p.has("speeds")) {
                throw ConfigError(p.path("speeds") + ": required");
            }
            p.numbers("speeds", w);
            point.speeds = RotorSpeeds(w[0], w[1], w[2], w[3]);
            p.finish();
            spec.points.push_back(point);
        }
    }
    s.finish();
}

void read_scenario(Section& s, ScenarioSpec& sc, bool degrees) {
    s.number("duration", sc.duration);
    s.number("dt", sc.dt);
    s.number("max_dt", sc.max_dt);
    Section init(s.child("initial"), s.path("initial"), degrees);
    init.vec3("position", sc.position);
    init.vec3("velocity", sc.velocity);
    init.vec3("attitude_rpy", sc.attitude_rpy, true);
    init.vec3("body_rates", sc.body_rates);
    init.finish();
    Section sched(s.child("schedule"), s.path("schedule"), degrees);
    read_schedule(sched, sc.schedule);
    s.finish();
}

void read_analysis(Section& s, AnalysisOptions& a) {
    s.number("eps", a.eps);
    s.boolean("gyroscopic", a.gyroscopic);
    s.list("d_values", a.d_values);
    s.list("alpha_values", a.alpha_values, true);
    s.integer("sweep_preset", a.sweep_preset);
    s.finish();
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

template <typename T, std::size_t N>
json array_json(const std::array<T, N>& a) {
    json out = json::array();
    for (const T& x : a) {
        out.push_back(x);
    }
    return out;
}

Mat3 attitude_from_rpy(const Vec3& rpy) {
    return rot_axis(Axis::Z, rpy.z()) * rot_axis(Axis::Y, rpy.y()) * rot_axis(Axis::X, rpy.x());
}

}  // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.params = default_params();
    return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& source_path) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                                   ": " + e.what(),
                               line, column);
    }

    RunConfig cfg;
    cfg.source_path = source_path;
    cfg.params = default_params();
    cfg.params.com_offset = 0.0;  // a file starts from a flat, centred vehicle

    Section top(&doc, "", false);
    top.integer("schema_version", cfg.schema_version);
    if (cfg.schema_version != kSchemaVersion) {
        throw ConfigError("schema_version: unsupported version " + std::to_string(cfg.schema_version));
    }
    bool degrees = false;
    top.boolean("degrees", degrees);

    Section params(top.child("params"), "params", degrees);
    read_params(params, cfg.params);
    Section rotor(top.child("rotor"), "rotor", degrees);
    read_rotor(rotor, cfg);
    Section blade(top.child("blade"), "blade", degrees);
    read_blade(blade, cfg.params);
    Section scenario(top.child("scenario"), "scenario", degrees);
    read_scenario(scenario, cfg.scenario, degrees);
    Section analysis(top.child("analysis"), "analysis", degrees);
    read_analysis(analysis, cfg.analysis);
    top.finish();

    if (cfg.preset) {
        set_preset(cfg, *cfg.preset);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

void set_preset(RunConfig& config, int id) {
    try {
        const ConfigPreset preset = ConfigPreset::from_id(id);
        config.params = apply_preset(config.params, preset, config.magnitude_alpha, config.magnitude_beta);
    } catch (const Error& e) {
        throw ConfigError(std::string("rotor.preset: ") + e.what());
    }
    config.preset = id;
}

void validate(const RunConfig& config) {
    try {
        config.params.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    const auto require = [](bool ok, const std::string& message) {
        if (!ok) {
            throw ConfigError("invalid config: " + message);
        }
    };
    const double quarter = std::numbers::pi / 4;
    require(config.magnitude_alpha > 0.0 && config.magnitude_alpha < quarter,
            "magnitude_alpha must be in (0, pi/4)");
    require(config.magnitude_beta > 0.0 && config.magnitude_beta < quarter, "magnitude_beta must be in (0, pi/4)");

    const ScenarioSpec& sc = config.scenario;
    require(sc.dt > 0.0, "dt must be > 0");
    require(sc.max_dt >= sc.dt, "dt must be <= max_dt");
    require(sc.duration >= sc.dt, "duration must be >= dt");
    if (sc.schedule.mode == ScheduleSpec::Mode::Table) {
        const auto& pts = sc.schedule.points;
        require(!pts.empty(), "schedule.points must not be empty for a table schedule");
        require(pts.front().t <= 0.0, "schedule.points must start at t <= 0");
        for (std::size_t k = 0; k < pts.size(); ++k) {
            require(k == 0 || pts[k].t > pts[k - 1].t, "schedule.points times must be strictly increasing");
            require((pts[k].speeds.array() >= 0.0).all() &&
                        (pts[k].speeds.array() <= config.params.rotor.max_speed).all(),
                    "schedule.points speeds must be in [0, max_speed]");
        }
        require(sc.schedule.interpolation == RotorSchedule::Interpolation::Hold || pts.size() == 1 ||
                    pts.back().t >= sc.duration,
                "a linear schedule must cover the whole duration");
    } else {
        require(sc.schedule.points.empty(), "schedule.points is only valid with mode \"table\"");
    }

    const AnalysisOptions& a = config.analysis;
    require(a.eps > 0.0 && a.eps < 1e-2, "eps must be in (0, 1e-2)");
    require(!a.d_values.empty(), "d_values must not be empty");
    require(!a.alpha_values.empty(), "alpha_values must not be empty");
    require(a.sweep_preset >= 1 && a.sweep_preset <= ConfigPreset::kCount, "sweep_preset must be in 1..6");
}

json to_json(const RunConfig& config) {
    const QuadParams& p = config.params;
    json rotor = {
        {"k_f", p.rotor.k_f},
        {"k_t", p.rotor.k_t},
        {"spin_sign", array_json(p.rotor.spin_sign)},
        {"azimuth_offset", p.rotor.azimuth_offset},
        {"max_speed", p.rotor.max_speed},
        {"magnitude_alpha", config.magnitude_alpha},
        {"magnitude_beta", config.magnitude_beta},
    };
    if (config.preset) {
        rotor["preset"] = *config.preset;
    } else {
        rotor["alpha"] = array_json(p.rotor.alpha);
        rotor["beta"] = array_json(p.rotor.beta);
    }

    const ScenarioSpec& sc = config.scenario;
    json schedule = {
        {"mode", sc.schedule.mode == ScheduleSpec::Mode::Trim ? "trim" : "table"},
        {"interpolation", sc.schedule.interpolation == RotorSchedule::Interpolation::Hold ? "hold" : "linear"},
    };
    if (sc.schedule.mode == ScheduleSpec::Mode::Table) {
        json points = json::array();
        for (const auto& pt : sc.schedule.points) {
            points.push_back({{"t", pt.t}, {"speeds", {pt.speeds(0), pt.speeds(1), pt.speeds(2), pt.speeds(3)}}});
        }
        schedule["points"] = points;
    }

    return {
        {"schema_version", config.schema_version},
        {"degrees", false},
        {"params",
         {
             {"mass", p.mass},
             {"inertia", vec_json(p.inertia_diag)},
             {"prop_inertia", p.prop_inertia},
             {"arm_length", p.arm_length},
             {"com_offset", p.com_offset},
             {"gravity", p.gravity},
             {"gyroscopic", p.model.gyroscopic},
         }},
        {"rotor", rotor},
        {"blade",
         {
             {"rho", p.blade.rho},
             {"sigma", p.blade.sigma},
             {"chord", p.blade.chord},
             {"blade_radius", p.blade.blade_radius},
             {"zeta_roll", p.blade.zeta_roll},
             {"zeta_pitch", p.blade.zeta_pitch},
             {"zeta_yaw", p.blade.zeta_yaw},
             {"dampers", p.model.dihedral_dampers},
             {"translational", p.model.translational_dihedral},
             {"damper_model", damper_model_name(p.model.damper_model)},
         }},
        {"scenario",
         {
             {"duration", sc.duration},
             {"dt", sc.dt},
             {"max_dt", sc.max_dt},
             {"initial",
              {
                  {"position", vec_json(sc.position)},
                  {"velocity", vec_json(sc.velocity)},
                  {"attitude_rpy", vec_json(sc.attitude_rpy)},
                  {"body_rates", vec_json(sc.body_rates)},
              }},
             {"schedule", schedule},
         }},
        {"analysis",
         {
             {"eps", config.analysis.eps},
             {"gyroscopic", config.analysis.gyroscopic},
             {"d_values", config.analysis.d_values},
             {"alpha_values", config.analysis.alpha_values},
             {"sweep_preset", config.analysis.sweep_preset},
         }},
    };
}

Scenario make_scenario(const RunConfig& config) {
    const ScenarioSpec& sc = config.scenario;
    Scenario s;
    s.params = config.params;
    s.duration = sc.duration;
    s.dt = sc.dt;
    s.max_dt = sc.max_dt;
    if (sc.schedule.mode == ScheduleSpec::Mode::Trim) {
        s.schedule = RotorSchedule(hover_trim(config.params));
    } else {
        s.schedule = RotorSchedule(sc.schedule.points, sc.schedule.interpolation);
    }
    s.initial.position = sc.position;
    s.initial.velocity = sc.velocity;
    s.initial.attitude = attitude_from_rpy(sc.attitude_rpy);
    s.initial.body_rates = sc.body_rates;
    s.initial.rotor_speeds = s.schedule.at(0.0);
    s.validate();
    return s;
}

}  // namespace tiltquad
