#include "sinv/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sinv {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("'" + path + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown key '" + path + "." + it.key() + "'");
    }
}

double get_num(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError("missing key '" + path + "." + key + "'");
    if (!j[key].is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
    return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& path, const char* key, double dflt) {
    return j.contains(key) ? get_num(j, path, key) : dflt;
}

ActuatorParams parse_actuator(const json& j, const std::string& path) {
    check_keys(j, path, {"E", "w", "a", "b", "t", "L0", "n", "M_eq", "C_n", "c_gain"});
    ActuatorParams p{};
    p.E = get_num(j, path, "E");
    p.w = get_num(j, path, "w");
    p.a = get_num(j, path, "a");
    p.b = get_num(j, path, "b");
    p.t = get_num(j, path, "t");
    p.L0 = get_num(j, path, "L0");
    p.n = get_num(j, path, "n");
    p.M_eq = get_num(j, path, "M_eq");
    p.C_n = get_num(j, path, "C_n");
    p.c_gain = get_num(j, path, "c_gain");
    return p;
}

PumpParams parse_pump(const json& j, const std::string& path) {
    check_keys(j, path, {"A_syr", "lead", "C_i", "omega_max"});
    PumpParams p{};
    p.A_syr = get_num(j, path, "A_syr");
    p.lead = get_num(j, path, "lead");
    p.C_i = get_num(j, path, "C_i");
    p.omega_max = get_num_or(j, path, "omega_max", 5.0);
    return p;
}

GripperModel parse_gripper(const json& j) {
    check_keys(j, "gripper", {"channels", "physical", "perturbation_bounds"});
    GripperModel model;
    if (j.contains("channels") == j.contains("physical"))
        throw ConfigError("gripper needs exactly one of 'channels' or 'physical'");
    if (j.contains("channels")) {
        if (!j["channels"].is_array() || j["channels"].empty())
            throw ConfigError("'gripper.channels' must be a non-empty array");
        int i = 0;
        for (const auto& ch : j["channels"]) {
            std::string path = "gripper.channels[" + std::to_string(i++) + "]";
            check_keys(ch, path, {"k_gain", "c_ratio", "k_ratio"});
            model.channels.push_back({get_num(ch, path, "k_gain"),
                                      get_num(ch, path, "c_ratio"),
                                      get_num(ch, path, "k_ratio")});
        }
    } else {
        if (!j["physical"].is_array() || j["physical"].empty())
            throw ConfigError("'gripper.physical' must be a non-empty array");
        int i = 0;
        for (const auto& ph : j["physical"]) {
            std::string path = "gripper.physical[" + std::to_string(i++) + "]";
            check_keys(ph, path, {"actuator", "pump", "pressure"});
            if (!ph.contains("actuator") || !ph.contains("pump"))
                throw ConfigError("'" + path + "' needs 'actuator' and 'pump'");
            try {
                model.channels.push_back(channel_coeffs(
                    parse_actuator(ph["actuator"], path + ".actuator"),
                    parse_pump(ph["pump"], path + ".pump"), get_num(ph, path, "pressure")));
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw ConfigError(path + ": " + e.what());
            }
        }
    }
    if (j.contains("perturbation_bounds")) {
        const auto& b = j["perturbation_bounds"];
        check_keys(b, "gripper.perturbation_bounds", {"delta_c", "delta_k"});
        model.bounds.delta_c = get_num(b, "gripper.perturbation_bounds", "delta_c");
        model.bounds.delta_k = get_num(b, "gripper.perturbation_bounds", "delta_k");
    }
    return model;
}

ControllerConfig parse_controller(const json& j) {
    check_keys(j, "controller",
               {"cutoff", "min_order", "inverse_kind", "feedback", "fb_cutoff"});
    ControllerConfig c;
    c.cutoff = get_num_or(j, "controller", "cutoff", 5.0);
    c.min_order = static_cast<int>(get_num_or(j, "controller", "min_order", 2));
    if (j.contains("inverse_kind")) {
        if (!j["inverse_kind"].is_string())
            throw ConfigError("'controller.inverse_kind' must be a string");
        try {
            c.kind = left_inverse_kind_from_string(j["inverse_kind"].get<std::string>());
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("feedback")) {
        if (!j["feedback"].is_boolean())
            throw ConfigError("'controller.feedback' must be a boolean");
        c.feedback = j["feedback"].get<bool>();
    }
    c.fb_cutoff = get_num_or(j, "controller", "fb_cutoff", c.cutoff);
    return c;
}

void parse_scenario(const json& j, ScenarioSpec& s) {
    check_keys(j, "scenario",
               {"reference", "duration", "Ts", "settling_band", "steady_start",
                "pump_speed_limit", "noise", "disturbance", "perturbation"});
    if (j.contains("reference")) {
        const auto& r = j["reference"];
        check_keys(r, "scenario.reference", {"amplitude", "start"});
        s.reference.amplitude = get_num(r, "scenario.reference", "amplitude");
        s.reference.start = get_num_or(r, "scenario.reference", "start", 0.0);
    }
    s.duration = get_num_or(j, "scenario", "duration", 10.0);
    s.Ts = get_num_or(j, "scenario", "Ts", 0.1);
    s.settling_band = get_num_or(j, "scenario", "settling_band", 0.02);
    s.steady_start = get_num_or(j, "scenario", "steady_start", -1.0);
    s.pump_speed_limit = get_num_or(j, "scenario", "pump_speed_limit", 5.0);
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        check_keys(n, "scenario.noise", {"sigma", "seed"});
        s.noise.sigma = get_num(n, "scenario.noise", "sigma");
        s.noise.seed = static_cast<std::uint64_t>(get_num_or(n, "scenario.noise", "seed", 0));
    }
    if (j.contains("disturbance")) {
        const auto& d = j["disturbance"];
        check_keys(d, "scenario.disturbance",
                   {"finger", "start", "duration", "amplitude", "tau"});
        s.disturbance.finger = static_cast<int>(get_num(d, "scenario.disturbance", "finger"));
        s.disturbance.start = get_num(d, "scenario.disturbance", "start");
        s.disturbance.duration = get_num(d, "scenario.disturbance", "duration");
        s.disturbance.amplitude = get_num(d, "scenario.disturbance", "amplitude");
        s.disturbance.tau = get_num_or(d, "scenario.disturbance", "tau", 0.5);
    }
    if (j.contains("perturbation")) {
        const auto& p = j["perturbation"];
        check_keys(p, "scenario.perturbation", {"enabled", "seed"});
        if (p.contains("enabled")) {
            if (!p["enabled"].is_boolean())
                throw ConfigError("'scenario.perturbation.enabled' must be a boolean");
            s.perturbation.enabled = p["enabled"].get<bool>();
        }
        s.perturbation.seed =
            static_cast<std::uint64_t>(get_num_or(p, "scenario.perturbation", "seed", 0));
    }
}

AnalysisConfig parse_analysis(const json& j) {
    check_keys(j, "analysis",
               {"n_seeds", "mc_draws", "weight_draws", "omega_min", "omega_max",
                "omega_points"});
    AnalysisConfig a;
    a.n_seeds = static_cast<int>(get_num_or(j, "analysis", "n_seeds", 50));
    a.mc_draws = static_cast<int>(get_num_or(j, "analysis", "mc_draws", 1000));
    a.weight_draws = static_cast<int>(get_num_or(j, "analysis", "weight_draws", 64));
    a.omega_min = get_num_or(j, "analysis", "omega_min", 0.1);
    a.omega_max = get_num_or(j, "analysis", "omega_max", 100.0);
    a.omega_points = static_cast<int>(get_num_or(j, "analysis", "omega_points", 40));
    return a;
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config", {"gripper", "controller", "scenario", "analysis", "output_dir"});
    if (!j.contains("gripper")) throw ConfigError("missing key 'gripper'");
    Config cfg;
    cfg.gripper = parse_gripper(j["gripper"]);
    if (j.contains("controller")) cfg.controller = parse_controller(j["controller"]);
    if (j.contains("scenario")) parse_scenario(j["scenario"], cfg.scenario);
    if (j.contains("analysis")) cfg.analysis = parse_analysis(j["analysis"]);
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    cfg.scenario.model = cfg.gripper;
    cfg.scenario.feedback_enabled = cfg.controller.feedback;
    cfg.scenario.validate();
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// ---- presets (mirrored byte-for-byte under configs/) ----

namespace {

const char* kFig7a = R"({
  "gripper": {
    "channels": [
      {"k_gain": 7.831, "c_ratio": 2.66, "k_ratio": 3.61},
      {"k_gain": 7.831, "c_ratio": 2.45, "k_ratio": 3.06}
    ],
    "perturbation_bounds": {"delta_c": 0.143, "delta_k": 0.059}
  },
  "controller": {
    "cutoff": 5.0,
    "min_order": 2,
    "inverse_kind": "averaged",
    "feedback": true,
    "fb_cutoff": 2.0
  },
  "scenario": {
    "reference": {"amplitude": 1.0471975511965976, "start": 0.0},
    "duration": 10.0,
    "Ts": 0.1
  },
  "output_dir": "out/fig7a"
}
)";

const char* kFig7b = R"({
  "gripper": {
    "channels": [
      {"k_gain": 7.831, "c_ratio": 2.66, "k_ratio": 3.61},
      {"k_gain": 7.831, "c_ratio": 2.45, "k_ratio": 3.06}
    ],
    "perturbation_bounds": {"delta_c": 0.143, "delta_k": 0.059}
  },
  "controller": {
    "cutoff": 5.0,
    "min_order": 2,
    "inverse_kind": "averaged",
    "feedback": true,
    "fb_cutoff": 2.0
  },
  "scenario": {
    "reference": {"amplitude": 1.0471975511965976, "start": 0.0},
    "duration": 10.0,
    "Ts": 0.1,
    "steady_start": 5.0,
    "noise": {"sigma": 0.034906585039886591, "seed": 42},
    "perturbation": {"enabled": true, "seed": 2025}
  },
  "analysis": {"n_seeds": 50},
  "output_dir": "out/fig7b"
}
)";

const char* kFig7c = R"({
  "gripper": {
    "channels": [
      {"k_gain": 7.831, "c_ratio": 2.66, "k_ratio": 3.61},
      {"k_gain": 7.831, "c_ratio": 2.45, "k_ratio": 3.06}
    ],
    "perturbation_bounds": {"delta_c": 0.143, "delta_k": 0.059}
  },
  "controller": {
    "cutoff": 5.0,
    "min_order": 2,
    "inverse_kind": "averaged",
    "feedback": true,
    "fb_cutoff": 3.0
  },
  "scenario": {
    "reference": {"amplitude": 1.0471975511965976, "start": 0.0},
    "duration": 18.0,
    "Ts": 0.1,
    "disturbance": {"finger": 0, "start": 4.0, "duration": 4.0, "amplitude": 0.43, "tau": 1.5}
  },
  "output_dir": "out/fig7c"
}
)";

const char* kFig8 = R"({
  "gripper": {
    "channels": [
      {"k_gain": 7.831, "c_ratio": 2.66, "k_ratio": 3.61},
      {"k_gain": 7.831, "c_ratio": 2.76, "k_ratio": 3.88},
      {"k_gain": 7.831, "c_ratio": 2.45, "k_ratio": 3.06}
    ],
    "perturbation_bounds": {"delta_c": 0.143, "delta_k": 0.059}
  },
  "controller": {
    "cutoff": 5.0,
    "min_order": 2,
    "inverse_kind": "averaged",
    "feedback": true,
    "fb_cutoff": 2.0
  },
  "scenario": {
    "reference": {"amplitude": 1.0471975511965976, "start": 0.0},
    "duration": 10.0,
    "Ts": 0.1
  },
  "output_dir": "out/fig8"
}
)";

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig7a", "fig7b", "fig7c", "fig8"};
    return names;
}

const std::string& preset_text(const std::string& name) {
    static const std::string a = kFig7a, b = kFig7b, c = kFig7c, d = kFig8;
    if (name == "fig7a") return a;
    if (name == "fig7b") return b;
    if (name == "fig7c") return c;
    if (name == "fig8") return d;
    throw ConfigError("unknown preset '" + name + "' (available: fig7a, fig7b, fig7c, fig8)");
}

Config preset(const std::string& name) { return parse_config(preset_text(name)); }

}  // namespace sinv
