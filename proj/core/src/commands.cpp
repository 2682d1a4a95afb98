#include "sinv/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sinv/state_space.hpp"

namespace sinv {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    fs::path p = fs::path(dir) / name;
    std::ofstream out(p);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

Controller build_controller(const Config& cfg) {
    RationalMatrix P = cfg.gripper.stack();
    RationalFunction y_d(Polynomial{cfg.scenario.reference.amplitude}, Polynomial{0.0, 1.0});
    Controller ctrl = synthesize_feedforward(P, y_d, cfg.controller.cutoff,
                                             cfg.controller.kind, cfg.controller.min_order);
    if (cfg.controller.feedback) ctrl = wire_feedback(ctrl, cfg.controller.fb_cutoff);
    return ctrl;
}

int cmd_synth(const Config& cfg, const std::string& out_dir, std::ostream& log) {
    Controller ctrl;
    try {
        ctrl = build_controller(cfg);
    } catch (const Error& e) {
        log << "synthesis error: " << e.what() << "\n";
        return kExitSynth;
    }
    log << "u_ff = " << ctrl.u_ff.str() << "\n";
    log << "filter: cutoff=" << fmt(ctrl.filter.cutoff) << " order=" << ctrl.filter.order
        << "\n";
    if (ctrl.u_ff.is_zero()) {
        log << "stability: trivially stable (zero feedforward)\n";
    } else {
        StabilityClass verdict = classify_stability(ctrl.u_ff.den());
        log << "stability: " << to_string(verdict.tag)
            << " (worst pole real part " << fmt(verdict.witness) << ")\n";
    }
    for (int i = 0; i < ctrl.n_fingers(); ++i)
        log << "p_dagger_" << i << " = " << ctrl.p_dagger.at(0, i).str() << "\n";
    try {
        auto out = open_out(out_dir, "controller.manifest");
        out << controller_to_manifest(ctrl);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    log << "manifest written to " << (fs::path(out_dir) / "controller.manifest").string()
        << "\n";
    return kExitOk;
}

int cmd_simulate(const Config& cfg, const std::string& out_dir, std::ostream& log) {
    Controller ctrl;
    try {
        ctrl = build_controller(cfg);
    } catch (const Error& e) {
        log << "synthesis error: " << e.what() << "\n";
        return kExitSynth;
    }
    SimTrace trace;
    Metrics metrics;
    try {
        std::tie(trace, metrics) = run_scenario(cfg.scenario, ctrl);
    } catch (const Error& e) {
        log << "simulation error: " << e.what() << "\n";
        return kExitSim;
    }
    try {
        auto tf = open_out(out_dir, "trace.csv");
        write_trace_csv(tf, trace);
        auto mf = open_out(out_dir, "metrics.txt");
        write_metrics(mf, metrics);
        auto cf = open_out(out_dir, "controller.manifest");
        cf << controller_to_manifest(ctrl);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    double settling = 0.0;
    for (double s : metrics.settling_time) settling = std::max(settling, s);
    double pooled = 0.0;
    for (double r : metrics.rmse) pooled += r * r;
    pooled = std::sqrt(pooled / static_cast<double>(metrics.rmse.size()));
    log << "settling=" << fmt(settling) << " sync=" << fmt(metrics.sync_error)
        << " rmse=" << fmt(pooled) << "\n";
    return kExitOk;
}

int cmd_analyze(const Config& cfg, const std::string& out_dir, std::ostream& log) {
    std::ostringstream report;
    try {
        // Minimality of the joint realization (one shared pressure state).
        int n = cfg.gripper.n_fingers();
        StackedRealization joint = stacked_realization(cfg.gripper);
        MinimalityReport minimal = check_minimal(joint.A, joint.B, joint.C);
        report << "controllable=" << (minimal.controllable ? "yes" : "no") << "\n";
        report << "observable=" << (minimal.observable ? "yes" : "no") << "\n";

        // Perturbation-bound Monte Carlo.
        const auto& bounds = cfg.gripper.bounds;
        double max_dc = 0.0, max_dk = 0.0;
        bool in_bounds = true;
        for (int draw = 0; draw < cfg.analysis.mc_draws; ++draw) {
            GripperModel pert = perturb_sample(
                cfg.gripper,
                splitmix64(cfg.scenario.perturbation.seed + static_cast<std::uint64_t>(draw)));
            for (int i = 0; i < n; ++i) {
                double dc = std::abs(pert.channels[static_cast<std::size_t>(i)].c_ratio /
                                         cfg.gripper.channels[static_cast<std::size_t>(i)].c_ratio -
                                     1.0);
                double dk = std::abs(pert.channels[static_cast<std::size_t>(i)].k_ratio /
                                         cfg.gripper.channels[static_cast<std::size_t>(i)].k_ratio -
                                     1.0);
                max_dc = std::max(max_dc, dc);
                max_dk = std::max(max_dk, dk);
                if (dc > bounds.delta_c + 1e-12 || dk > bounds.delta_k + 1e-12)
                    in_bounds = false;
            }
        }
        report << "perturbation_draws=" << cfg.analysis.mc_draws << "\n";
        report << "bound_delta_c=" << fmt(bounds.delta_c) << " empirical_max="
               << fmt(max_dc) << "\n";
        report << "bound_delta_k=" << fmt(bounds.delta_k) << " empirical_max="
               << fmt(max_dk) << "\n";
        report << "within_bounds=" << (in_bounds ? "yes" : "no") << "\n";

        // Robustness weight per finger over a log-spaced grid.
        std::vector<double> grid(static_cast<std::size_t>(cfg.analysis.omega_points));
        double ratio = std::log(cfg.analysis.omega_max / cfg.analysis.omega_min) /
                       (cfg.analysis.omega_points - 1);
        for (int i = 0; i < cfg.analysis.omega_points; ++i)
            grid[static_cast<std::size_t>(i)] = cfg.analysis.omega_min * std::exp(ratio * i);
        for (int i = 0; i < n; ++i) {
            std::vector<RationalFunction> perturbed;
            for (int draw = 0; draw < cfg.analysis.weight_draws; ++draw) {
                GripperModel pert = perturb_sample(
                    cfg.gripper, splitmix64(cfg.scenario.perturbation.seed + 7919u +
                                            static_cast<std::uint64_t>(draw)));
                perturbed.push_back(pert.channels[static_cast<std::size_t>(i)].tf());
            }
            WeightFit fit = fit_robustness_weight(
                cfg.gripper.channels[static_cast<std::size_t>(i)].tf(), perturbed, grid);
            double worst = 0.0;
            for (auto& [w, s] : fit.samples) worst = std::max(worst, s);
            report << "w_t_" << i + 1 << ": k=" << fmt(fit.k) << " z=" << fmt(fit.z)
                   << " p=" << fmt(fit.p) << " envelope_max=" << fmt(worst) << "\n";
        }
    } catch (const Error& e) {
        log << "analysis error: " << e.what() << "\n";
        return kExitSynth;
    }
    try {
        auto out = open_out(out_dir, "report.txt");
        out << report.str();
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    log << report.str();
    return kExitOk;
}

int cmd_identify(const std::string& trace_path, double gain, double u_step,
                 const std::string& out_dir, std::ostream& log) {
    StepTrace trace;
    try {
        std::ifstream in(trace_path);
        if (!in) throw Error("cannot open trace file '" + trace_path + "'");
        trace = read_step_trace(in);
        trace.u_step = u_step;
    } catch (const Error& e) {
        log << "trace error: " << e.what() << "\n";
        return kExitConfig;
    }
    IdentifiedParams id;
    try {
        id = identify_second_order(trace, gain);
    } catch (const FitFailed& e) {
        log << "fit failed: " << e.what() << "\n";
        return kExitFit;
    } catch (const Error& e) {
        log << "identification error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        auto out = open_out(out_dir, "identified.txt");
        out << "c_ratio=" << fmt(id.c_ratio) << "\n"
            << "k_ratio=" << fmt(id.k_ratio) << "\n"
            << "fit_percent=" << fmt(id.fit_percent) << "\n";
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    log << "c_ratio=" << fmt(id.c_ratio) << " k_ratio=" << fmt(id.k_ratio)
        << " fit_percent=" << fmt(id.fit_percent) << "\n";
    return kExitOk;
}

}  // namespace sinv
