#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sinv/plant.hpp"
#include "sinv/synth.hpp"

namespace sinv {

struct ReferenceSpec {
    double amplitude = 0.0;  // rad
    double start = 0.0;      // s
};

struct NoiseSpec {
    double sigma = 0.0;  // rad, per sensor, Gaussian, measurements only
    std::uint64_t seed = 0;
};

/// Additive output disturbance on one finger: rectangular pulse shaped by a
/// first-order filter with time constant tau (an ideal step offset would hit
/// both compared controllers identically within one sample).
struct DisturbanceSpec {
    int finger = -1;  // < 0 disables
    double start = 0.0;
    double duration = 0.0;
    double amplitude = 0.0;  // rad
    double tau = 0.5;        // s

    bool active() const { return finger >= 0 && amplitude != 0.0 && duration > 0.0; }
};

struct PerturbationSpec {
    bool enabled = false;  // sample the true plant from the model's bounds
    std::uint64_t seed = 0;
};

struct ScenarioSpec {
    GripperModel model;
    ReferenceSpec reference;
    double duration = 10.0;
    double Ts = 0.1;
    NoiseSpec noise;
    DisturbanceSpec disturbance;
    PerturbationSpec perturbation;
    bool feedback_enabled = true;
    double settling_band = 0.02;     // fraction of step amplitude
    double steady_start = -1.0;      // RMSE window start; < 0 means duration/2
    double pump_speed_limit = 5.0;   // rev/s, logged not clipped

    void validate() const;  // throws ConfigError
};

struct SimTrace {
    double Ts = 0.0;
    std::vector<double> t, ref, u_ff, u_fb, u_c;
    std::vector<std::vector<double>> y;       // [finger][sample], noiseless true output
    std::vector<std::vector<double>> y_meas;  // with sensor noise
    std::vector<std::vector<double>> d;       // injected disturbance

    int n_fingers() const { return static_cast<int>(y.size()); }
};

struct Metrics {
    std::vector<double> settling_time;  // s from reference start, 2% band
    std::vector<bool> settled;
    std::vector<double> rmse;  // rad, over the steady window, vs reference
    double sync_error = 0.0;   // rad, max over time of max pairwise gap
    double settling_band = 0.02;
    bool has_disturbance = false;
    std::vector<double> peak_error;  // rad vs pre-disturbance baseline
    double recovery_time = 0.0;      // s, target finger, band re-entry
    bool recovered = true;
    int speed_limit_violations = 0;
};

/// One deterministic closed-loop run. The feedforward path is simulated as the
/// exact per-channel cascade P_i * U^a / Y_d driven by the step reference
/// (exact at the samples); the feedback path is superposed through separate
/// true/nominal plant copies driven by -u_fb, so y_delta = y_meas - y_nominal
/// sees only true-vs-nominal deviation.
std::pair<SimTrace, Metrics> run_scenario(const ScenarioSpec& spec, const Controller& ctrl);

struct NoiseComparison {
    double rmse_ff_only = 0.0;  // rad, mean over seeds
    double rmse_ff_fb = 0.0;
};

/// Mean steady-state RMSE across independently sub-seeded runs, feedback off
/// vs on. Sub-seeds derive from the spec seeds via splitmix64(seed + index).
NoiseComparison noise_comparison(const ScenarioSpec& spec, const Controller& ctrl,
                                 int n_seeds);

struct DisturbanceComparison {
    double peak_ff = 0.0;
    double peak_fb = 0.0;
    double recovery_ff = 0.0;
    double recovery_fb = 0.0;
};

DisturbanceComparison disturbance_comparison(const ScenarioSpec& spec,
                                             const Controller& ctrl);

/// Continuous-response oracle: the same nominal cascades integrated densely at
/// Ts/substeps, sampled back at Ts. [finger][sample].
std::vector<std::vector<double>> nominal_response_dense(const ScenarioSpec& spec,
                                                        const Controller& ctrl,
                                                        int substeps);

std::uint64_t splitmix64(std::uint64_t x);

/// CSV with header t,ref,y1..yn,ymeas1..ymeasn,u_ff,u_fb,u_c,d1..dn at 9
/// significant digits.
void write_trace_csv(std::ostream& os, const SimTrace& trace);
SimTrace read_trace_csv(std::istream& is);

/// Flat key=value rendering.
void write_metrics(std::ostream& os, const Metrics& m);

}  // namespace sinv
