#include "sinv/plant.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "detail/nelder_mead.hpp"
#include "sinv/state_space.hpp"

namespace sinv {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw Error(std::string(name) + " must be strictly positive");
}

}  // namespace

void ActuatorParams::validate() const {
    require_positive(E, "E");
    require_positive(w, "w");
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(t, "t");
    require_positive(L0, "L0");
    require_positive(n, "n");
    require_positive(M_eq, "M_eq");
    require_positive(C_n, "C_n");
    require_positive(c_gain, "c_gain");
}

void PumpParams::validate() const {
    require_positive(A_syr, "A_syr");
    require_positive(lead, "lead");
    require_positive(C_i, "C_i");
    require_positive(omega_max, "omega_max");
}

double moment_of_inertia(const ActuatorParams& p) {
    p.validate();
    return std::pow(0.5, p.n) * (1.0 / (2.0 + p.n)) * p.w * std::pow(p.a + p.b, 2.0 + p.n);
}

double spring_constant(const ActuatorParams& p) {
    p.validate();
    return std::pow((p.n + 1.0) / p.n, p.n) * p.E * moment_of_inertia(p) /
           std::pow(p.L0, p.n + 1.0);
}

double pump_pressure_rate(const PumpParams& p, double omega_m) {
    p.validate();
    if (std::abs(omega_m) > p.omega_max) throw SpeedLimitExceeded(omega_m, p.omega_max);
    return p.A_syr * p.lead * omega_m / (2.0 * std::numbers::pi * p.C_i);
}

RationalFunction ChannelCoeffs::tf() const {
    return {Polynomial{k_gain}, Polynomial{0.0, k_ratio, c_ratio, 1.0}};
}

ChannelCoeffs channel_coeffs(const ActuatorParams& act, const PumpParams& pump,
                             double pressure) {
    act.validate();
    pump.validate();
    if (std::abs(act.n - 1.0) > 1e-12) throw NonlinearExponent();
    double gain = act.c_gain * pressure * pump.A_syr * pump.lead /
                  (2.0 * std::numbers::pi * pump.C_i * act.M_eq);
    return {gain, act.C_n / act.M_eq, spring_constant(act) / act.M_eq};
}

RationalFunction channel_tf(const ActuatorParams& act, const PumpParams& pump,
                            double pressure) {
    return channel_coeffs(act, pump, pressure).tf();
}

NaturalFrequency natural_frequency(double c_ratio, double k_ratio) {
    if (!(k_ratio > 0.0)) throw Error("k_ratio must be positive");
    double wn = std::sqrt(k_ratio);
    return {wn, c_ratio / (2.0 * wn), wn >= 2.0 && wn <= 3.0};
}

RationalMatrix GripperModel::stack() const { return stack_simo(channels); }

RationalMatrix stack_simo(const std::vector<ChannelCoeffs>& channels) {
    if (channels.empty()) throw EmptyChannelList();
    std::vector<RationalFunction> entries;
    entries.reserve(channels.size());
    for (const auto& ch : channels) entries.push_back(ch.tf());
    return RationalMatrix::column(entries);
}

GripperModel perturb_sample(const GripperModel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dc(-model.bounds.delta_c, model.bounds.delta_c);
    std::uniform_real_distribution<double> dk(-model.bounds.delta_k, model.bounds.delta_k);
    GripperModel out = model;
    for (auto& ch : out.channels) {
        ch.c_ratio *= 1.0 + (model.bounds.delta_c > 0.0 ? dc(rng) : 0.0);
        ch.k_ratio *= 1.0 + (model.bounds.delta_k > 0.0 ? dk(rng) : 0.0);
    }
    return out;
}

void StepTrace::validate() const {
    if (t.size() != y.size()) throw Error("step trace t/y length mismatch");
    if (t.size() < 2) throw Error("step trace needs at least two samples");
    double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw Error("step trace times must be strictly increasing");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, dt))
            throw Error("step trace sampling must be uniform");
}

void write_step_trace(std::ostream& os, const StepTrace& trace) {
    os << "t,y\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", trace.t[i], trace.y[i]);
        os << buf;
    }
}

StepTrace read_step_trace(std::istream& is) {
    StepTrace trace;
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,y", 0) != 0)
        throw Error("step trace CSV must start with header 't,y'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw Error("malformed step trace row: '" + line + "'");
        trace.t.push_back(std::stod(a));
        trace.y.push_back(std::stod(b));
    }
    trace.validate();
    return trace;
}

namespace {

std::vector<double> simulate_channel_step(const ChannelCoeffs& ch, double dt,
                                          std::size_t samples, double u_step) {
    DiscreteSimulator sim(discretize_zoh(realize(ch.tf()), dt));
    std::vector<double> y(samples);
    for (std::size_t i = 0; i < samples; ++i) y[i] = sim.step(u_step);
    return y;
}

}  // namespace

IdentifiedParams identify_second_order(const StepTrace& trace, double k_known) {
    trace.validate();
    if (trace.t.size() < 50) throw Error("identification needs at least 50 samples");
    if (trace.u_step == 0.0) throw Error("identification needs a nonzero input step");
    double dt = trace.t[1] - trace.t[0];
    double mean = 0.0;
    for (double v : trace.y) mean += v;
    mean /= static_cast<double>(trace.y.size());
    double denom = 0.0;
    for (double v : trace.y) denom += (v - mean) * (v - mean);
    denom = std::sqrt(denom);
    if (denom == 0.0) throw FitFailed("constant trace carries no dynamics");

    auto cost = [&](std::array<double, 2> logck) {
        ChannelCoeffs ch{k_known, std::exp(logck[0]), std::exp(logck[1])};
        auto yhat = simulate_channel_step(ch, dt, trace.y.size(), trace.u_step);
        double sse = 0.0;
        for (std::size_t i = 0; i < yhat.size(); ++i) {
            double e = trace.y[i] - yhat[i];
            sse += e * e;
        }
        return sse;
    };

    std::array<double, 2> best{};
    double best_cost = std::numeric_limits<double>::infinity();
    // Log-grid multistart over the plausible decade span of the soft fingers.
    for (double c0 : {0.7, 2.0, 5.6}) {
        for (double k0 : {0.7, 2.0, 5.6}) {
            auto x = detail::nelder_mead_2d(cost, {std::log(c0), std::log(k0)}, 0.5, 160);
            double fx = cost(x);
            if (fx < best_cost) {
                best_cost = fx;
                best = x;
            }
        }
    }
    double fit = 100.0 * (1.0 - std::sqrt(best_cost) / denom);
    if (fit < 0.0) throw FitFailed("fit accuracy below 0%");
    return {std::exp(best[0]), std::exp(best[1]), fit};
}

StackedRealization stacked_realization(const GripperModel& model) {
    int n = model.n_fingers();
    if (n < 1) throw EmptyChannelList();
    StackedRealization out;
    int dim = 2 * n + 1;
    out.A = Eigen::MatrixXd::Zero(dim, dim);
    out.B = Eigen::MatrixXd::Zero(dim, 1);
    out.C = Eigen::MatrixXd::Zero(n, dim);
    out.B(0, 0) = 1.0;  // shared pressure integrator: pdot = u
    for (int i = 0; i < n; ++i) {
        const ChannelCoeffs& ch = model.channels[static_cast<std::size_t>(i)];
        int off = 1 + 2 * i;  // [theta, theta_dot]
        out.A(off, off + 1) = 1.0;
        out.A(off + 1, off) = -ch.k_ratio;
        out.A(off + 1, off + 1) = -ch.c_ratio;
        out.A(off + 1, 0) = ch.k_gain;
        out.C(i, off) = 1.0;
    }
    return out;
}

namespace {

int svd_rank(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double tol = static_cast<double>(std::max(m.rows(), m.cols())) * sv(0) * 1e-12;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return rank;
}

}  // namespace

MinimalityReport check_minimal(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& C) {
    int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.rows() != n || C.cols() != n)
        throw Error("check_minimal: inconsistent matrix dimensions");
    Eigen::MatrixXd ctrb(n, static_cast<int>(B.cols()) * n);
    Eigen::MatrixXd block = B;
    for (int i = 0; i < n; ++i) {
        ctrb.middleCols(i * static_cast<int>(B.cols()), static_cast<int>(B.cols())) = block;
        block = A * block;
    }
    Eigen::MatrixXd obsv(static_cast<int>(C.rows()) * n, n);
    Eigen::MatrixXd cblock = C;
    for (int i = 0; i < n; ++i) {
        obsv.middleRows(i * static_cast<int>(C.rows()), static_cast<int>(C.rows())) = cblock;
        cblock = cblock * A;
    }
    return {svd_rank(ctrb) == n, svd_rank(obsv) == n};
}

}  // namespace sinv
