#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sinv/commands.hpp"
#include "sinv/state_space.hpp"

using namespace sinv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("sinv_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

#ifdef SINV_CLI_PATH
int run_cli(const std::string& args) {
    std::string cmd = std::string("\"") + SINV_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status >= 0);
    return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("config parsing is strict") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);

    // unknown keys are rejected and named
    try {
        parse_config(R"({"gripper": {"channels": [{"k_gain": 1, "c_ratio": 1, "k_ratio": 1}]},
                         "scenrio": {}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("scenrio") != std::string::npos);
    }
    try {
        parse_config(R"({"gripper": {"channels": [{"k_gain": 1, "c_ratio": 1, "k_ratio": 1,
                         "zeta": 0.5}]}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("zeta") != std::string::npos);
    }

    // gripper takes exactly one of channels | physical
    CHECK_THROWS_AS(parse_config(R"({"gripper": {}})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"gripper": {"channels": [{"k_gain": 1, "c_ratio": 1, "k_ratio": 1}],
                         "physical": []}})"),
        ConfigError);

    // scenarios too short to sample are rejected at parse time
    CHECK_THROWS_AS(
        parse_config(R"({"gripper": {"channels": [{"k_gain": 1, "c_ratio": 1, "k_ratio": 1}]},
                         "scenario": {"duration": 0.5, "Ts": 0.1}})"),
        ConfigError);
}

TEST_CASE("physical gripper configs derive channel coefficients") {
    Config cfg = parse_config(R"({
      "gripper": {"physical": [{
        "actuator": {"E": 0.34e6, "w": 0.02, "a": 0.0075, "b": 0.0075, "t": 0.002,
                     "L0": 0.1, "n": 1.0, "M_eq": 0.05, "C_n": 0.12, "c_gain": 1.0},
        "pump": {"A_syr": 1e-3, "lead": 0.01, "C_i": 1e-4},
        "pressure": 2.0e3}]}})");
    REQUIRE(cfg.gripper.n_fingers() == 1);
    CHECK(cfg.gripper.channels[0].c_ratio == doctest::Approx(0.12 / 0.05));
    CHECK(cfg.gripper.channels[0].k_ratio == doctest::Approx(0.765 / 0.05));
}

TEST_CASE("presets parse and mirror the files under configs/") {
    for (const std::string& name : preset_names()) {
        Config cfg = preset(name);
        CHECK(cfg.gripper.n_fingers() >= 2);
        CHECK(cfg.scenario.reference.amplitude == doctest::Approx(1.0471975511965976));
        std::string on_disk = slurp(fs::path(SINV_REPO_DIR) / "configs" / (name + ".json"));
        CHECK(preset_text(name) == on_disk);
    }
    CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("simulate command writes its artifacts and is deterministic") {
    Config cfg = preset("fig7a");
    fs::path a = fresh_dir("sim_a"), b = fresh_dir("sim_b");
    std::ostringstream log_a, log_b;
    REQUIRE(cmd_simulate(cfg, a.string(), log_a) == kExitOk);
    REQUIRE(cmd_simulate(cfg, b.string(), log_b) == kExitOk);
    for (const char* f : {"trace.csv", "metrics.txt", "controller.manifest"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(log_a.str() == log_b.str());
    CHECK(log_a.str().find("settling=") != std::string::npos);

    std::istringstream trace_in(slurp(a / "trace.csv"));
    std::string header;
    std::getline(trace_in, header);
    CHECK(header == "t,ref,y1,y2,ymeas1,ymeas2,u_ff,u_fb,u_c,d1,d2");

    Controller back = controller_from_manifest(slurp(a / "controller.manifest"));
    CHECK(controller_to_manifest(back) == slurp(a / "controller.manifest"));
}

TEST_CASE("two-finger preset regression") {
    Config cfg = preset("fig7a");
    auto [trace, metrics] = run_scenario(cfg.scenario, build_controller(cfg));
    REQUIRE(metrics.settling_time.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(metrics.settled[i]);
        CHECK(metrics.settling_time[i] >= 0.9);
        CHECK(metrics.settling_time[i] <= 1.5);
    }
    CHECK(metrics.sync_error == doctest::Approx(0.183752051).epsilon(1e-6));
    // per-channel steady-state offsets of the averaged inverse
    CHECK(metrics.rmse[0] == doctest::Approx(0.0797565880).epsilon(1e-4));
    CHECK(metrics.rmse[1] == doctest::Approx(0.0940713989).epsilon(1e-4));
    CHECK(metrics.speed_limit_violations == 3);
}

TEST_CASE("three-finger preset regression") {
    Config cfg = preset("fig8");
    auto [trace, metrics] = run_scenario(cfg.scenario, build_controller(cfg));
    REQUIRE(metrics.settling_time.size() == 3);
    double worst = 0.0;
    for (double s : metrics.settling_time) worst = std::max(worst, s);
    CHECK(worst == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(metrics.sync_error == doctest::Approx(0.268488011).epsilon(1e-6));
}

TEST_CASE("disturbance preset regression") {
    Config cfg = preset("fig7c");
    DisturbanceComparison cmp = disturbance_comparison(cfg.scenario, build_controller(cfg));
    CHECK(cmp.peak_ff > 0.36);
    CHECK(cmp.peak_ff < 0.44);
    CHECK(cmp.peak_fb < 0.6 * cmp.peak_ff);
    CHECK(cmp.recovery_fb < cmp.recovery_ff);
}

TEST_CASE("noisy preset regression: feedback reduces but does not erase error") {
    Config cfg = preset("fig7b");
    NoiseComparison cmp =
        noise_comparison(cfg.scenario, build_controller(cfg), cfg.analysis.n_seeds);
    CHECK(cmp.rmse_ff_fb < cmp.rmse_ff_only);
    // the structural tracking floor of the averaged inverse survives feedback
    CHECK(cmp.rmse_ff_fb > 0.05);
}

TEST_CASE("synth and analyze commands") {
    Config cfg = preset("fig7a");
    fs::path dir = fresh_dir("synth");
    std::ostringstream log;
    REQUIRE(cmd_synth(cfg, dir.string(), log) == kExitOk);
    CHECK(log.str().find("u_ff = ") != std::string::npos);
    CHECK(log.str().find("Hurwitz") != std::string::npos);
    CHECK(fs::exists(dir / "controller.manifest"));

    Config fast = cfg;
    fast.analysis.mc_draws = 200;
    fast.analysis.weight_draws = 16;
    fs::path adir = fresh_dir("analyze");
    std::ostringstream alog;
    REQUIRE(cmd_analyze(fast, adir.string(), alog) == kExitOk);
    std::string report = slurp(adir / "report.txt");
    CHECK(report.find("controllable=yes") != std::string::npos);
    CHECK(report.find("observable=yes") != std::string::npos);
    CHECK(report.find("within_bounds=yes") != std::string::npos);
    CHECK(report.find("w_t_1:") != std::string::npos);
    CHECK(report.find("w_t_2:") != std::string::npos);
    CHECK(alog.str() == report);
}

TEST_CASE("identify command round-trip and failure exit codes") {
    // make a clean step trace, identify it back
    ChannelCoeffs truth{7.831, 2.66, 3.61};
    StepTrace trace;
    trace.u_step = 0.2;
    DiscreteSimulator sim(discretize_zoh(realize(truth.tf()), 0.1));
    for (int k = 0; k < 120; ++k) {
        trace.t.push_back(0.1 * k);
        trace.y.push_back(sim.step(trace.u_step));
    }
    fs::path dir = fresh_dir("identify");
    {
        std::ofstream out(dir / "step.csv");
        write_step_trace(out, trace);
    }
    std::ostringstream log;
    REQUIRE(cmd_identify((dir / "step.csv").string(), 7.831, 0.2, dir.string(), log) ==
            kExitOk);
    std::string id = slurp(dir / "identified.txt");
    CHECK(id.find("c_ratio=") != std::string::npos);
    std::istringstream parse(id.substr(id.find("c_ratio=") + 8));
    double c = 0.0;
    parse >> c;
    CHECK(c == doctest::Approx(2.66).epsilon(0.01));

    std::ostringstream quiet;
    CHECK(cmd_identify((dir / "missing.csv").string(), 7.831, 0.2, dir.string(), quiet) ==
          kExitConfig);

    {
        std::ofstream out(dir / "flat.csv");
        out << "t,y\n";
        for (int k = 0; k < 80; ++k) out << 0.1 * k << ",0\n";
    }
    CHECK(cmd_identify((dir / "flat.csv").string(), 7.831, 0.2, dir.string(), quiet) ==
          kExitFit);
}

#ifdef SINV_CLI_PATH

TEST_CASE("binary exit codes") {
    fs::path dir = fresh_dir("bin");
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("synth") == kExitConfig);  // neither --config nor --preset
    CHECK(run_cli("simulate --preset fig7a --config x.json --out " + (dir / "o").string()) ==
          kExitConfig);
    CHECK(run_cli("simulate --preset fig9 --out " + (dir / "o").string()) == kExitConfig);
    CHECK(run_cli("simulate --config /nonexistent.json --out " + (dir / "o").string()) ==
          kExitConfig);
    CHECK(run_cli("synth --preset fig7a --out " + (dir / "synth").string()) == kExitOk);
    CHECK(fs::exists(dir / "synth" / "controller.manifest"));
    CHECK(run_cli("simulate --preset fig7a --out " + (dir / "sim").string()) == kExitOk);
    CHECK(fs::exists(dir / "sim" / "trace.csv"));
    CHECK(run_cli("identify --trace /nonexistent.csv --gain 7.831 --out " +
                  (dir / "id").string()) == kExitConfig);
    CHECK(run_cli("frobnicate") == kExitConfig);
}

#endif
