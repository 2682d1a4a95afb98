#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sinv/commands.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to a scenario config (JSON)");
    cmd->add_option("--preset", opts.preset_name,
                    "built-in scenario: fig7a, fig7b, fig7c or fig8");
    cmd->add_option("--out", opts.out_dir, "output directory (default: from config)");
    cmd->add_option("--seed", opts.seed, "override the noise/perturbation seeds")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

// Loads the config named by --config/--preset and applies overrides.
// Returns kExitOk or kExitConfig.
int resolve_config(const CommonOpts& opts, sinv::Config& cfg) {
    try {
        if (opts.config_path.empty() == opts.preset_name.empty()) {
            std::cerr << "exactly one of --config or --preset is required\n";
            return sinv::kExitConfig;
        }
        cfg = opts.config_path.empty() ? sinv::preset(opts.preset_name)
                                       : sinv::load_config_file(opts.config_path);
    } catch (const sinv::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sinv::kExitConfig;
    }
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (opts.seed_set) {
        cfg.scenario.noise.seed = opts.seed;
        cfg.scenario.perturbation.seed = sinv::splitmix64(opts.seed);
    }
    return sinv::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable-inversion control of one-pump multi-finger soft grippers"};
    app.require_subcommand(1);

    CommonOpts synth_opts, sim_opts, analyze_opts;
    auto* synth = app.add_subcommand("synth", "synthesize the controller and write its manifest");
    add_common(synth, synth_opts);
    auto* simulate = app.add_subcommand("simulate", "run the closed-loop scenario");
    add_common(simulate, sim_opts);
    auto* analyze =
        app.add_subcommand("analyze", "minimality, perturbation bounds and robustness weight");
    add_common(analyze, analyze_opts);

    std::string trace_path, id_out = "out";
    double gain = 0.0, u_step = 1.0;
    auto* identify =
        app.add_subcommand("identify", "fit second-order parameters to a step trace");
    identify->add_option("--trace", trace_path, "two-column CSV (t,y)")->required();
    identify->add_option("--gain", gain, "known channel gain k_gain")->required();
    identify->add_option("--step", u_step, "input step amplitude applied in the trace");
    identify->add_option("--out", id_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sinv::kExitConfig;
    }

    if (identify->parsed())
        return sinv::cmd_identify(trace_path, gain, u_step, id_out, std::cout);

    const CommonOpts& opts = synth->parsed() ? synth_opts
                             : simulate->parsed() ? sim_opts
                                                  : analyze_opts;
    sinv::Config cfg;
    if (int rc = resolve_config(opts, cfg); rc != sinv::kExitOk) return rc;
    if (synth->parsed()) return sinv::cmd_synth(cfg, cfg.output_dir, std::cout);
    if (simulate->parsed()) return sinv::cmd_simulate(cfg, cfg.output_dir, std::cout);
    return sinv::cmd_analyze(cfg, cfg.output_dir, std::cout);
}
