// Microbenchmarks for the hot paths: explicit and implicit marches, the
// criterion series scan, critical-quasidifference bisection, and the damped
// operator iteration.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "halflin/halflin.hpp"

using namespace halflin;

namespace {

EquationSpec euler_reduced(double gamma, double alpha) {
    return EquationSpec{PowerShiftFamily{1.0, 0, 1.0 + alpha}, ConstantFamily{gamma},
                        PhiMap{alpha}, 1, 1};
}

EquationSpec factorial_spec() {
    return EquationSpec{FactorialShiftFamily{1}, FactorialShiftFamily{2}, PhiMap{1.0}, 2, 1};
}

void BM_SimulateExplicit(benchmark::State& state) {
    const Index horizon = state.range(0);
    EquationSpec spec = euler_reduced(0.2, 1.0);
    InitialData init{1, {1.0, -0.5}, true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(spec, init, horizon));
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_SimulateExplicit)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SimulateImplicitTwoStep(benchmark::State& state) {
    const Index horizon = state.range(0);
    EquationSpec spec = factorial_spec();
    InitialData init{1, {1.0, 0.5}, false};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(spec, init, horizon));
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_SimulateImplicitTwoStep)->Arg(14)->Arg(40);

void BM_CriterionSeries(benchmark::State& state) {
    const Index N = state.range(0);
    EquationSpec spec{PowerShiftFamily{1.0, 0, 2.0}, ConstantFamily{0.2}, PhiMap{1.0}, 2, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(criterion_series(spec, N, true));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_CriterionSeries)->Arg(10000)->Arg(100000);

void BM_ShootBisection(benchmark::State& state) {
    const Index horizon = state.range(0);
    EquationSpec spec = euler_reduced(0.2, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shoot_halflinear(spec, 1.0, horizon));
    }
}
BENCHMARK(BM_ShootBisection)->Arg(1000)->Arg(10000);

void BM_IterateReverse(benchmark::State& state) {
    const Index window = state.range(0);
    EquationSpec advanced{PowerShiftFamily{1.0, -1, 2.0}, ConstantFamily{0.2}, PhiMap{1.0},
                          2, 2};
    ShootResult sr = shoot_halflinear(halflinear_reduction(advanced), 1.0, 6000);
    Envelope env =
        build_envelope(OperatorDirection::ReverseToAdvanced, sr.trajectory, advanced);
    IterateOptions opts;
    opts.seed = IterationSeed::Upper;
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_operator(env, opts, window));
    }
}
BENCHMARK(BM_IterateReverse)->Arg(100)->Arg(400);

void BM_ClassifyTrajectory(benchmark::State& state) {
    const Index horizon = state.range(0);
    EquationSpec spec = euler_reduced(0.2, 1.0);
    ShootResult sr = shoot_halflinear(spec, 1.0, horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(sr.trajectory, spec));
    }
}
BENCHMARK(BM_ClassifyTrajectory)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
