#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "sinv/plant.hpp"
#include "sinv/state_space.hpp"

using namespace sinv;

namespace {

ActuatorParams reference_actuator() {
    // geometry giving the worked I_n/K_n values; dynamics terms arbitrary valid
    return {0.34e6, 0.02, 0.0075, 0.0075, 0.002, 0.1, 1.0, 0.05, 0.12, 1.0};
}

}  // namespace

TEST_CASE("moment of inertia and spring constant") {
    ActuatorParams p = reference_actuator();
    CHECK(moment_of_inertia(p) == doctest::Approx(1.125e-8).epsilon(1e-12));
    CHECK(spring_constant(p) == doctest::Approx(0.765).epsilon(1e-12));

    // scaling laws at n = 1
    ActuatorParams q = p;
    q.w *= 2.0;
    CHECK(moment_of_inertia(q) == doctest::Approx(2.0 * moment_of_inertia(p)));
    q = p;
    q.a *= 2.0;
    q.b *= 2.0;
    CHECK(moment_of_inertia(q) == doctest::Approx(8.0 * moment_of_inertia(p)));
    q = p;
    q.E *= 2.0;
    CHECK(spring_constant(q) == doctest::Approx(2.0 * spring_constant(p)));
    q = p;
    q.L0 *= 2.0;
    CHECK(spring_constant(q) == doctest::Approx(spring_constant(p) / 4.0));

    q = p;
    q.E = -1.0;
    CHECK_THROWS_AS(moment_of_inertia(q), Error);
}

TEST_CASE("pump pressure rate") {
    PumpParams pump{1e-3, 0.01, 1e-4, 5.0};
    CHECK(pump_pressure_rate(pump, 0.0) == 0.0);
    CHECK(pump_pressure_rate(pump, 1.0) == doctest::Approx(1.5915494309189535e-2));
    CHECK_THROWS_AS(pump_pressure_rate(pump, 6.0), SpeedLimitExceeded);
}

TEST_CASE("channel transfer function") {
    ChannelCoeffs ch{7.831, 2.66, 3.61};
    RationalFunction tf = ch.tf();
    CHECK(tf.num().same_as(Polynomial{7.831}));
    CHECK(tf.den().same_as(Polynomial{0.0, 3.61, 2.66, 1.0}));

    // marginal overall (pole at 0), Hurwitz quadratic cofactor
    auto verdict = classify_stability(tf.den());
    CHECK(verdict.tag == StabilityTag::MarginallyStable);
    auto [q, r] = poly_divmod(tf.den(), Polynomial{0.0, 1.0});
    CHECK(r.is_zero());
    CHECK(classify_stability(q).tag == StabilityTag::Hurwitz);

    ActuatorParams act = reference_actuator();
    PumpParams pump{1e-3, 0.01, 1e-4, 5.0};
    ChannelCoeffs derived = channel_coeffs(act, pump, 2.0e3);
    CHECK(derived.c_ratio == doctest::Approx(act.C_n / act.M_eq));
    CHECK(derived.k_ratio == doctest::Approx(spring_constant(act) / act.M_eq));
    CHECK(derived.k_gain ==
          doctest::Approx(act.c_gain * 2.0e3 * pump.A_syr * pump.lead /
                          (2.0 * 3.14159265358979324 * pump.C_i * act.M_eq)));
    act.n = 1.5;
    CHECK_THROWS_AS(channel_coeffs(act, pump, 2.0e3), NonlinearExponent);
}

TEST_CASE("natural frequency") {
    CHECK(natural_frequency(2.66, 3.61).omega_n == doctest::Approx(1.9));
    CHECK_FALSE(natural_frequency(2.66, 3.61).in_design_range);
    auto crit = natural_frequency(4.0, 4.0);
    CHECK(crit.omega_n == doctest::Approx(2.0));
    CHECK(crit.zeta == doctest::Approx(1.0));
    CHECK(crit.in_design_range);
    CHECK(natural_frequency(2.45, 3.06).omega_n == doctest::Approx(1.7492855684));
}

TEST_CASE("SIMO stacking") {
    CHECK(stack_simo({{7.831, 2.66, 3.61}}).rows() == 1);
    RationalMatrix p = stack_simo({{7.831, 2.66, 3.61}, {7.831, 2.45, 3.06}});
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 1);
    CHECK(rank_rs(p) == 1);
    CHECK_THROWS_AS(stack_simo({}), EmptyChannelList);
}

TEST_CASE("perturbation sampling") {
    GripperModel model{{{7.831, 2.66, 3.61}, {7.831, 2.45, 3.06}}, {0.143, 0.059}};

    GripperModel frozen = model;
    frozen.bounds = {0.0, 0.0};
    GripperModel same = perturb_sample(frozen, 123);
    CHECK(same.channels[0].c_ratio == frozen.channels[0].c_ratio);
    CHECK(same.channels[1].k_ratio == frozen.channels[1].k_ratio);

    GripperModel a = perturb_sample(model, 42);
    GripperModel b = perturb_sample(model, 42);
    CHECK(a.channels[0].c_ratio == b.channels[0].c_ratio);
    CHECK(a.channels[1].k_ratio == b.channels[1].k_ratio);

    double max_dc = 0.0, max_dk = 0.0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        GripperModel s = perturb_sample(model, seed);
        for (std::size_t i = 0; i < 2; ++i) {
            double dc = std::abs(s.channels[i].c_ratio / model.channels[i].c_ratio - 1.0);
            double dk = std::abs(s.channels[i].k_ratio / model.channels[i].k_ratio - 1.0);
            CHECK(dc <= 0.143 + 1e-12);
            CHECK(dk <= 0.059 + 1e-12);
            max_dc = std::max(max_dc, dc);
            max_dk = std::max(max_dk, dk);
        }
    }
    // empirical extremes approach the declared bounds
    CHECK(max_dc > 0.143 * 0.98);
    CHECK(max_dk > 0.059 * 0.98);
}

TEST_CASE("step trace CSV round-trip") {
    StepTrace trace;
    for (int k = 0; k < 60; ++k) {
        trace.t.push_back(0.1 * k);
        trace.y.push_back(std::sin(0.05 * k));
    }
    std::ostringstream os;
    write_step_trace(os, trace);
    std::istringstream is(os.str());
    StepTrace back = read_step_trace(is);
    REQUIRE(back.t.size() == trace.t.size());
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        CHECK(back.t[i] == doctest::Approx(trace.t[i]).epsilon(1e-9));
        CHECK(back.y[i] == doctest::Approx(trace.y[i]).epsilon(1e-9));
    }
    std::istringstream bad("nope\n1,2\n");
    CHECK_THROWS_AS(read_step_trace(bad), Error);
}

namespace {

StepTrace synth_trace(const ChannelCoeffs& ch, double dt, int samples, double u_step) {
    StepTrace trace;
    trace.u_step = u_step;
    DiscreteSimulator sim(discretize_zoh(realize(ch.tf()), dt));
    for (int k = 0; k < samples; ++k) {
        trace.t.push_back(dt * k);
        trace.y.push_back(sim.step(u_step));
    }
    return trace;
}

}  // namespace

TEST_CASE("identification round-trips noise-free parameters") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ck(1.0, 5.0);
    for (int i = 0; i < 15; ++i) {
        ChannelCoeffs truth{7.831, ck(rng), ck(rng)};
        StepTrace trace = synth_trace(truth, 0.1, 120, 0.2);
        IdentifiedParams id = identify_second_order(trace, truth.k_gain);
        CHECK(std::abs(id.c_ratio / truth.c_ratio - 1.0) < 0.01);
        CHECK(std::abs(id.k_ratio / truth.k_ratio - 1.0) < 0.01);
        CHECK(id.fit_percent > 99.0);
    }
}

TEST_CASE("identification failure modes") {
    StepTrace flat;
    for (int k = 0; k < 80; ++k) {
        flat.t.push_back(0.1 * k);
        flat.y.push_back(0.0);
    }
    CHECK_THROWS_AS(identify_second_order(flat, 7.831), FitFailed);

    StepTrace tiny = flat;
    tiny.t.resize(10);
    tiny.y.resize(10);
    CHECK_THROWS_AS(identify_second_order(tiny, 7.831), Error);
}

TEST_CASE("minimality checks") {
    Eigen::MatrixXd A(2, 2), B(2, 1), C(1, 2);
    A << 0, 1, 0, 0;
    B << 0, 1;
    C << 1, 0;
    MinimalityReport rep = check_minimal(A, B, C);
    CHECK(rep.controllable);
    CHECK(rep.observable);

    Eigen::MatrixXd zeroB = Eigen::MatrixXd::Zero(2, 1);
    CHECK_FALSE(check_minimal(A, zeroB, C).controllable);

    // joint two-finger realization shares the pressure integrator and stays
    // minimal; naively duplicating each channel block-diagonally puts the
    // same origin pole in two input-connected blocks and is NOT controllable
    GripperModel model{{{7.831, 2.66, 3.61}, {7.831, 2.45, 3.06}}, {}};
    StackedRealization joint = stacked_realization(model);
    CHECK(joint.A.rows() == 5);
    MinimalityReport full = check_minimal(joint.A, joint.B, joint.C);
    CHECK(full.controllable);
    CHECK(full.observable);

    Eigen::MatrixXd As = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd Bs = Eigen::MatrixXd::Zero(6, 1);
    Eigen::MatrixXd Cs = Eigen::MatrixXd::Zero(2, 6);
    for (int i = 0; i < 2; ++i) {
        StateSpace ss = realize(model.channels[static_cast<std::size_t>(i)].tf());
        As.block(3 * i, 3 * i, 3, 3) = ss.A;
        Bs.block(3 * i, 0, 3, 1) = ss.B;
        Cs.block(i, 3 * i, 1, 3) = ss.C;
    }
    CHECK_FALSE(check_minimal(As, Bs, Cs).controllable);
}

TEST_CASE("joint realization reproduces the channel transfer functions") {
    GripperModel model{{{7.831, 2.66, 3.61}, {7.831, 2.45, 3.06}}, {}};
    StackedRealization joint = stacked_realization(model);
    for (int i = 0; i < 2; ++i) {
        RationalFunction tf = model.channels[static_cast<std::size_t>(i)].tf();
        for (double w : {0.5, 1.3, 2.7}) {
            std::complex<double> s0(0.4, w);
            Eigen::MatrixXcd si =
                s0 * Eigen::MatrixXcd::Identity(joint.A.rows(), joint.A.cols());
            std::complex<double> via_ss =
                (joint.C.row(i).cast<std::complex<double>>() *
                 (si - joint.A.cast<std::complex<double>>()).inverse() *
                 joint.B.cast<std::complex<double>>())(0);
            CHECK(std::abs(via_ss - tf.eval(s0)) < 1e-10 * (1.0 + std::abs(via_ss)));
        }
    }
}
