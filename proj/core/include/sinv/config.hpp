#pragma once

#include <string>
#include <vector>

#include "sinv/sim.hpp"

namespace sinv {

struct ControllerConfig {
    double cutoff = 5.0;
    int min_order = 2;
    LeftInverseKind kind = LeftInverseKind::Averaged;
    bool feedback = true;
    double fb_cutoff = 5.0;  // defaults to the feedforward cutoff when absent
};

struct AnalysisConfig {
    int n_seeds = 50;      // noise comparison Monte Carlo
    int mc_draws = 1000;   // perturbation-bound Monte Carlo
    int weight_draws = 64; // perturbed plants per weight fit
    double omega_min = 0.1;
    double omega_max = 100.0;
    int omega_points = 40;
};

struct Config {
    GripperModel gripper;
    ControllerConfig controller;
    ScenarioSpec scenario;  // scenario.model mirrors gripper
    AnalysisConfig analysis;
    std::string output_dir = "out";
};

/// Strict parse: unknown keys are rejected with the offending key path, and
/// the scenario is validated before anything runs. Throws ConfigError.
Config parse_config(const std::string& json_text);
Config load_config_file(const std::string& path);

/// Canned scenarios shipped with the repo (also present under configs/).
const std::vector<std::string>& preset_names();
const std::string& preset_text(const std::string& name);
Config preset(const std::string& name);

}  // namespace sinv
