#include "sinv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "sinv/state_space.hpp"

namespace sinv {

void ScenarioSpec::validate() const {
    if (model.channels.empty()) throw ConfigError("scenario needs at least one channel");
    if (!(Ts > 0.0)) throw ConfigError("Ts must be positive");
    if (!(duration >= 10.0 * Ts)) throw ConfigError("duration must be at least 10*Ts");
    if (!(settling_band > 0.0)) throw ConfigError("settling band must be positive");
    if (noise.sigma < 0.0) throw ConfigError("noise sigma must be nonnegative");
    if (reference.start < 0.0 || reference.start >= duration)
        throw ConfigError("reference start must lie inside the run");
    if (steady_start >= duration) throw ConfigError("steady window start past the run end");
    if (!(pump_speed_limit > 0.0)) throw ConfigError("pump speed limit must be positive");
    if (model.bounds.delta_c < 0.0 || model.bounds.delta_c >= 1.0 ||
        model.bounds.delta_k < 0.0 || model.bounds.delta_k >= 1.0)
        throw ConfigError("perturbation bounds must lie in [0, 1)");
    if (disturbance.active()) {
        if (disturbance.finger >= static_cast<int>(model.channels.size()))
            throw ConfigError("disturbance finger index out of range");
        if (disturbance.start < 0.0 ||
            disturbance.start + disturbance.duration > duration)
            throw ConfigError("disturbance window must lie within the run");
        if (!(disturbance.tau > 0.0)) throw ConfigError("disturbance tau must be positive");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// U^a divided by the reference transform: the map from the step reference
// signal to u_ff. Biproper for the plants this library targets.
RationalFunction reference_to_uff(const Controller& ctrl) {
    if (ctrl.u_ff.is_zero() || ctrl.reference.is_zero()) return {};
    return ctrl.u_ff / ctrl.reference;
}

std::vector<DiscreteSimulator> cascade_bank(const std::vector<ChannelCoeffs>& channels,
                                            const RationalFunction& c_ref, double Ts) {
    std::vector<DiscreteSimulator> bank;
    bank.reserve(channels.size());
    for (const auto& ch : channels)
        bank.emplace_back(discretize_zoh(realize(ch.tf() * c_ref), Ts));
    return bank;
}

std::vector<DiscreteSimulator> plant_bank(const std::vector<ChannelCoeffs>& channels,
                                          double Ts) {
    std::vector<DiscreteSimulator> bank;
    bank.reserve(channels.size());
    for (const auto& ch : channels) bank.emplace_back(discretize_zoh(realize(ch.tf()), Ts));
    return bank;
}

}  // namespace

std::pair<SimTrace, Metrics> run_scenario(const ScenarioSpec& spec, const Controller& ctrl) {
    spec.validate();
    int n = spec.model.n_fingers();
    if (ctrl.n_fingers() != n)
        throw ConfigError("controller was synthesized for " +
                          std::to_string(ctrl.n_fingers()) + " fingers, scenario has " +
                          std::to_string(n));
    if (spec.feedback_enabled && !ctrl.feedback_enabled)
        throw ConfigError("scenario requests feedback but the controller has no feedback path");

    GripperModel true_model = spec.perturbation.enabled
                                  ? perturb_sample(spec.model, spec.perturbation.seed)
                                  : spec.model;

    double Ts = spec.Ts;
    int steps = static_cast<int>(std::llround(spec.duration / Ts));
    double amp = spec.reference.amplitude;
    auto ref_at = [&](double t) { return t >= spec.reference.start ? amp : 0.0; };

    RationalFunction c_ref = reference_to_uff(ctrl);
    bool have_ff = !c_ref.is_zero();

    // Exact feedforward cascades (true and nominal), driven by the reference.
    std::vector<DiscreteSimulator> ff_true =
        have_ff ? cascade_bank(true_model.channels, c_ref, Ts)
                : std::vector<DiscreteSimulator>{};
    std::vector<DiscreteSimulator> ff_nom =
        have_ff ? cascade_bank(spec.model.channels, c_ref, Ts)
                : std::vector<DiscreteSimulator>{};
    // Plant copies carrying only the feedback contribution (input -u_fb).
    std::vector<DiscreteSimulator> fb_true = plant_bank(true_model.channels, Ts);
    std::vector<DiscreteSimulator> fb_nom = plant_bank(spec.model.channels, Ts);
    std::vector<DiscreteSimulator> fb_gain;
    if (spec.feedback_enabled)
        for (int i = 0; i < n; ++i)
            fb_gain.emplace_back(discretize_zoh(realize(ctrl.fb_gain.at(0, i)), Ts));

    // Logged u_ff: average-hold equivalent of the continuous U^a response,
    // recovered as the forward difference of the discretized reference-to-u_ff
    // step response with v(-1) = 0 (keeps the biproper impulse charge).
    std::vector<double> uff_seq(static_cast<std::size_t>(steps), 0.0);
    if (have_ff) {
        // v[k] is the discretized response of U^a/amp (biproper) to the step
        // reference, i.e. samples of the integral of the continuous u_ff;
        // differencing it yields the average-hold u_ff sequence.
        DiscreteSimulator v(discretize_zoh(realize(ctrl.u_ff * (1.0 / amp)), Ts));
        double prev = 0.0;
        for (int k = 0; k < steps; ++k) {
            double vk = v.step(ref_at(k * Ts));
            uff_seq[static_cast<std::size_t>(k)] = (vk - prev) / Ts;
            prev = vk;
        }
    }

    std::mt19937_64 noise_rng(spec.noise.seed);
    std::normal_distribution<double> gauss(0.0, spec.noise.sigma > 0 ? spec.noise.sigma : 1.0);

    SimTrace trace;
    trace.Ts = Ts;
    trace.t.reserve(static_cast<std::size_t>(steps));
    trace.y.assign(static_cast<std::size_t>(n), {});
    trace.y_meas.assign(static_cast<std::size_t>(n), {});
    trace.d.assign(static_cast<std::size_t>(n), {});

    Metrics metrics;
    metrics.settling_band = spec.settling_band;
    metrics.has_disturbance = spec.disturbance.active();

    double dist_state = 0.0;
    int violations = 0;

    for (int k = 0; k < steps; ++k) {
        double t = k * Ts;
        double r = ref_at(t);

        std::vector<double> y_true(static_cast<std::size_t>(n), 0.0);
        std::vector<double> y_nom(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double ff_t = have_ff ? ff_true[static_cast<std::size_t>(i)].output(r) : 0.0;
            double ff_n = have_ff ? ff_nom[static_cast<std::size_t>(i)].output(r) : 0.0;
            // Plant copies are strictly proper: output is input-independent.
            y_true[static_cast<std::size_t>(i)] =
                ff_t + fb_true[static_cast<std::size_t>(i)].output(0.0);
            y_nom[static_cast<std::size_t>(i)] =
                ff_n + fb_nom[static_cast<std::size_t>(i)].output(0.0);
        }

        std::vector<double> d(static_cast<std::size_t>(n), 0.0);
        if (spec.disturbance.active()) {
            double target = (t >= spec.disturbance.start &&
                             t < spec.disturbance.start + spec.disturbance.duration)
                                ? spec.disturbance.amplitude
                                : 0.0;
            double a = std::exp(-Ts / spec.disturbance.tau);
            dist_state = a * dist_state + (1.0 - a) * target;
            d[static_cast<std::size_t>(spec.disturbance.finger)] = dist_state;
            y_true[static_cast<std::size_t>(spec.disturbance.finger)] += dist_state;
        }

        std::vector<double> y_meas(y_true);
        if (spec.noise.sigma > 0.0)
            for (int i = 0; i < n; ++i) y_meas[static_cast<std::size_t>(i)] += gauss(noise_rng);

        double u_fb = 0.0;
        if (spec.feedback_enabled)
            for (int i = 0; i < n; ++i)
                u_fb += fb_gain[static_cast<std::size_t>(i)].step(
                    y_meas[static_cast<std::size_t>(i)] - y_nom[static_cast<std::size_t>(i)]);
        double u_ff = uff_seq[static_cast<std::size_t>(k)];
        double u_c = u_ff - u_fb;
        if (std::abs(u_c) > spec.pump_speed_limit) ++violations;

        trace.t.push_back(t);
        trace.ref.push_back(r);
        trace.u_ff.push_back(u_ff);
        trace.u_fb.push_back(u_fb);
        trace.u_c.push_back(u_c);
        for (int i = 0; i < n; ++i) {
            trace.y[static_cast<std::size_t>(i)].push_back(y_true[static_cast<std::size_t>(i)]);
            trace.y_meas[static_cast<std::size_t>(i)].push_back(
                y_meas[static_cast<std::size_t>(i)]);
            trace.d[static_cast<std::size_t>(i)].push_back(d[static_cast<std::size_t>(i)]);
        }

        for (int i = 0; i < n; ++i) {
            if (have_ff) {
                ff_true[static_cast<std::size_t>(i)].step(r);
                ff_nom[static_cast<std::size_t>(i)].step(r);
            }
            fb_true[static_cast<std::size_t>(i)].step(-u_fb);
            fb_nom[static_cast<std::size_t>(i)].step(-u_fb);
        }
    }
    metrics.speed_limit_violations = violations;

    // ---- metrics from the noiseless y ----
    int start_idx = 0;
    while (start_idx < steps && trace.t[static_cast<std::size_t>(start_idx)] <
                                    spec.reference.start)
        ++start_idx;
    double band_tol = spec.settling_band * std::abs(amp);
    for (int i = 0; i < n; ++i) {
        const auto& y = trace.y[static_cast<std::size_t>(i)];
        if (amp == 0.0) {
            metrics.settling_time.push_back(0.0);
            metrics.settled.push_back(true);
        } else {
            double final = y.back();
            int last_bad = -1;
            for (int k = start_idx; k < steps; ++k)
                if (std::abs(y[static_cast<std::size_t>(k)] - final) > band_tol) last_bad = k;
            if (last_bad < 0) {
                metrics.settling_time.push_back(0.0);
                metrics.settled.push_back(true);
            } else if (last_bad + 1 >= steps) {
                metrics.settling_time.push_back(spec.duration - spec.reference.start);
                metrics.settled.push_back(false);
            } else {
                metrics.settling_time.push_back(
                    trace.t[static_cast<std::size_t>(last_bad + 1)] - spec.reference.start);
                metrics.settled.push_back(true);
            }
        }
        double steady_start = spec.steady_start >= 0.0 ? spec.steady_start
                                                       : spec.duration / 2.0;
        double sse = 0.0;
        int count = 0;
        for (int k = 0; k < steps; ++k) {
            if (trace.t[static_cast<std::size_t>(k)] < steady_start) continue;
            double e = y[static_cast<std::size_t>(k)] - trace.ref[static_cast<std::size_t>(k)];
            sse += e * e;
            ++count;
        }
        metrics.rmse.push_back(count > 0 ? std::sqrt(sse / count) : 0.0);
    }
    for (int k = 0; k < steps; ++k) {
        double lo = trace.y[0][static_cast<std::size_t>(k)], hi = lo;
        for (int i = 1; i < n; ++i) {
            lo = std::min(lo, trace.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
            hi = std::max(hi, trace.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        }
        metrics.sync_error = std::max(metrics.sync_error, hi - lo);
    }

    if (metrics.has_disturbance) {
        int k0 = 0;
        while (k0 < steps &&
               trace.t[static_cast<std::size_t>(k0)] < spec.disturbance.start)
            ++k0;
        for (int i = 0; i < n; ++i) {
            const auto& y = trace.y[static_cast<std::size_t>(i)];
            double baseline = k0 > 0 ? y[static_cast<std::size_t>(k0 - 1)] : 0.0;
            double peak = 0.0;
            for (int k = k0; k < steps; ++k)
                peak = std::max(peak, std::abs(y[static_cast<std::size_t>(k)] - baseline));
            metrics.peak_error.push_back(peak);
        }
        // Recovery of the hit finger: last excursion of the deviation (vs the
        // pre-disturbance baseline) outside the settling band.
        const auto& y = trace.y[static_cast<std::size_t>(spec.disturbance.finger)];
        double baseline = k0 > 0 ? y[static_cast<std::size_t>(k0 - 1)] : 0.0;
        double tol = band_tol > 0.0 ? band_tol
                                    : spec.settling_band * std::abs(spec.disturbance.amplitude);
        int last_bad = -1;
        for (int k = k0; k < steps; ++k)
            if (std::abs(y[static_cast<std::size_t>(k)] - baseline) > tol) last_bad = k;
        if (last_bad < 0) {
            metrics.recovery_time = 0.0;
        } else if (last_bad + 1 >= steps) {
            metrics.recovery_time = spec.duration - spec.disturbance.start;
            metrics.recovered = false;
        } else {
            metrics.recovery_time =
                trace.t[static_cast<std::size_t>(last_bad + 1)] - spec.disturbance.start;
        }
    }
    return {std::move(trace), std::move(metrics)};
}

NoiseComparison noise_comparison(const ScenarioSpec& spec, const Controller& ctrl,
                                 int n_seeds) {
    if (n_seeds < 1) throw ConfigError("noise comparison needs at least one seed");
    NoiseComparison out;
    for (int i = 0; i < n_seeds; ++i) {
        ScenarioSpec run = spec;
        run.noise.seed = splitmix64(spec.noise.seed + static_cast<std::uint64_t>(i));
        run.perturbation.seed =
            splitmix64(spec.perturbation.seed + static_cast<std::uint64_t>(i));
        auto pooled = [](const Metrics& m) {
            double acc = 0.0;
            for (double r : m.rmse) acc += r * r;
            return std::sqrt(acc / static_cast<double>(m.rmse.size()));
        };
        run.feedback_enabled = false;
        out.rmse_ff_only += pooled(run_scenario(run, ctrl).second);
        run.feedback_enabled = true;
        out.rmse_ff_fb += pooled(run_scenario(run, ctrl).second);
    }
    out.rmse_ff_only /= n_seeds;
    out.rmse_ff_fb /= n_seeds;
    return out;
}

DisturbanceComparison disturbance_comparison(const ScenarioSpec& spec,
                                             const Controller& ctrl) {
    if (!spec.disturbance.active())
        throw ConfigError("disturbance comparison needs an active disturbance");
    ScenarioSpec run = spec;
    run.feedback_enabled = false;
    Metrics ff = run_scenario(run, ctrl).second;
    run.feedback_enabled = true;
    Metrics fb = run_scenario(run, ctrl).second;
    std::size_t f = static_cast<std::size_t>(spec.disturbance.finger);
    return {ff.peak_error[f], fb.peak_error[f], ff.recovery_time, fb.recovery_time};
}

std::vector<std::vector<double>> nominal_response_dense(const ScenarioSpec& spec,
                                                        const Controller& ctrl,
                                                        int substeps) {
    spec.validate();
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    RationalFunction c_ref = reference_to_uff(ctrl);
    int n = spec.model.n_fingers();
    int steps = static_cast<int>(std::llround(spec.duration / spec.Ts));
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
    double dt = spec.Ts / substeps;
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(steps));
        if (c_ref.is_zero()) {
            out[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(steps), 0.0);
            continue;
        }
        DiscreteSimulator sim(discretize_zoh(
            realize(spec.model.channels[static_cast<std::size_t>(i)].tf() * c_ref), dt));
        for (int m = 0; m < steps * substeps; ++m) {
            double t = m * dt;
            double r = t >= spec.reference.start ? spec.reference.amplitude : 0.0;
            double y = sim.step(r);
            if (m % substeps == 0) out[static_cast<std::size_t>(i)].push_back(y);
        }
    }
    return out;
}

// ---- serialization ----

namespace {

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
    int n = trace.n_fingers();
    os << "t,ref";
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    for (int i = 1; i <= n; ++i) os << ",ymeas" << i;
    os << ",u_ff,u_fb,u_c";
    for (int i = 1; i <= n; ++i) os << ",d" << i;
    os << "\n";
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        os << fmt9(trace.t[k]) << ',' << fmt9(trace.ref[k]);
        for (int i = 0; i < n; ++i) os << ',' << fmt9(trace.y[static_cast<std::size_t>(i)][k]);
        for (int i = 0; i < n; ++i)
            os << ',' << fmt9(trace.y_meas[static_cast<std::size_t>(i)][k]);
        os << ',' << fmt9(trace.u_ff[k]) << ',' << fmt9(trace.u_fb[k]) << ','
           << fmt9(trace.u_c[k]);
        for (int i = 0; i < n; ++i) os << ',' << fmt9(trace.d[static_cast<std::size_t>(i)][k]);
        os << "\n";
    }
}

SimTrace read_trace_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw Error("empty trace CSV");
    // Finger count from the column total: 5 + 3n.
    int cols = 1;
    for (char c : header) cols += c == ',';
    if (cols < 8 || (cols - 5) % 3 != 0) throw Error("unrecognized trace CSV header");
    int n = (cols - 5) / 3;
    SimTrace trace;
    trace.y.assign(static_cast<std::size_t>(n), {});
    trace.y_meas.assign(static_cast<std::size_t>(n), {});
    trace.d.assign(static_cast<std::size_t>(n), {});
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != cols)
            throw Error("trace CSV row width mismatch: '" + line + "'");
        std::size_t c = 0;
        trace.t.push_back(vals[c++]);
        trace.ref.push_back(vals[c++]);
        for (int i = 0; i < n; ++i) trace.y[static_cast<std::size_t>(i)].push_back(vals[c++]);
        for (int i = 0; i < n; ++i)
            trace.y_meas[static_cast<std::size_t>(i)].push_back(vals[c++]);
        trace.u_ff.push_back(vals[c++]);
        trace.u_fb.push_back(vals[c++]);
        trace.u_c.push_back(vals[c++]);
        for (int i = 0; i < n; ++i) trace.d[static_cast<std::size_t>(i)].push_back(vals[c++]);
    }
    if (trace.t.size() >= 2) trace.Ts = trace.t[1] - trace.t[0];
    return trace;
}

void write_metrics(std::ostream& os, const Metrics& m) {
    os << "settling_band=" << fmt9(m.settling_band) << "\n";
    for (std::size_t i = 0; i < m.settling_time.size(); ++i) {
        os << "settling_time_" << i + 1 << "=" << fmt9(m.settling_time[i]) << "\n";
        os << "settled_" << i + 1 << "=" << (m.settled[i] ? 1 : 0) << "\n";
        os << "rmse_" << i + 1 << "=" << fmt9(m.rmse[i]) << "\n";
    }
    os << "sync_error=" << fmt9(m.sync_error) << "\n";
    os << "speed_limit_violations=" << m.speed_limit_violations << "\n";
    if (m.has_disturbance) {
        for (std::size_t i = 0; i < m.peak_error.size(); ++i)
            os << "peak_error_" << i + 1 << "=" << fmt9(m.peak_error[i]) << "\n";
        os << "recovery_time=" << fmt9(m.recovery_time) << "\n";
        os << "recovered=" << (m.recovered ? 1 : 0) << "\n";
    }
}

}  // namespace sinv
