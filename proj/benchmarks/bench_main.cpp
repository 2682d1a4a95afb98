#include <benchmark/benchmark.h>

#include <numbers>

#include "sinv/commands.hpp"
#include "sinv/state_space.hpp"

namespace {

using namespace sinv;

void BM_Synthesize(benchmark::State& state) {
    Config cfg = preset("fig7a");
    for (auto _ : state) benchmark::DoNotOptimize(build_controller(cfg));
}
BENCHMARK(BM_Synthesize);

void BM_RunScenario(benchmark::State& state) {
    Config cfg = preset("fig7a");
    Controller ctrl = build_controller(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(cfg.scenario, ctrl));
}
BENCHMARK(BM_RunScenario);

void BM_LeftInverseAveraged(benchmark::State& state) {
    RationalMatrix p = preset("fig8").gripper.stack();
    for (auto _ : state)
        benchmark::DoNotOptimize(left_inverse(p, LeftInverseKind::Averaged));
}
BENCHMARK(BM_LeftInverseAveraged);

void BM_LeftInverseGram(benchmark::State& state) {
    RationalMatrix p = preset("fig8").gripper.stack();
    for (auto _ : state)
        benchmark::DoNotOptimize(left_inverse(p, LeftInverseKind::GramBased));
}
BENCHMARK(BM_LeftInverseGram);

void BM_RankRs(benchmark::State& state) {
    RationalMatrix p = preset("fig8").gripper.stack();
    for (auto _ : state) benchmark::DoNotOptimize(rank_rs(p));
}
BENCHMARK(BM_RankRs);

void BM_DiscretizeZoh(benchmark::State& state) {
    StateSpace ss = realize(ChannelCoeffs{7.831, 2.66, 3.61}.tf());
    for (auto _ : state) benchmark::DoNotOptimize(discretize_zoh(ss, 0.1));
}
BENCHMARK(BM_DiscretizeZoh);

void BM_IdentifySecondOrder(benchmark::State& state) {
    ChannelCoeffs truth{7.831, 2.66, 3.61};
    StepTrace trace;
    trace.u_step = 0.2;
    DiscreteSimulator sim(discretize_zoh(realize(truth.tf()), 0.1));
    for (int k = 0; k < 120; ++k) {
        trace.t.push_back(0.1 * k);
        trace.y.push_back(sim.step(trace.u_step));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(identify_second_order(trace, truth.k_gain));
}
BENCHMARK(BM_IdentifySecondOrder);

}  // namespace

BENCHMARK_MAIN();
