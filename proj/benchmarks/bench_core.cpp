#include <benchmark/benchmark.h>

#include <vector>

#include "geolangevin/analytic.hpp"
#include "geolangevin/berry_phase.hpp"
#include "geolangevin/ensemble.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/path_measure.hpp"
#include "geolangevin/spectral.hpp"

using namespace geolangevin;

static void BM_Step(benchmark::State& state) {
    const ModelParams p;
    RandomStream rng(1);
    PhaseState s;
    s.r = p.start;
    for (auto _ : state) {
        s = step(s, p, ForceMode::simplified, rng).state;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Step);

static void BM_Simulate(benchmark::State& state) {
    ModelParams p;
    p.duration = static_cast<double>(state.range(0)) * p.dt;
    SimulationOptions opts;
    RandomStream rng(1);
    for (auto _ : state) {
        Trajectory t = simulate(p, opts, rng);
        benchmark::DoNotOptimize(t.states.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(2000)->Arg(20000);

static void BM_AccumulatePhase(benchmark::State& state) {
    const ModelParams p;
    RandomStream rng(1);
    const Trajectory t = simulate(p, SimulationOptions{}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(accumulate_phase(t));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.states.size()));
}
BENCHMARK(BM_AccumulatePhase);

static void BM_OmAction(benchmark::State& state) {
    const ModelParams p;
    RandomStream rng(1);
    const Trajectory t = simulate(p, SimulationOptions{}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(om_action(t, p, ForceMode::simplified).action);
}
BENCHMARK(BM_OmAction);

static void BM_RunEnsemble(benchmark::State& state) {
    const ModelParams p;
    EnsembleOptions o;
    o.n_paths = static_cast<std::size_t>(state.range(0));
    o.seed = 42;
    o.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(p, o).mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunEnsemble)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PositionPeriodogram(benchmark::State& state) {
    ModelParams p;
    p.duration = 100.0;
    RandomStream rng(1);
    const Trajectory t = simulate(p, SimulationOptions{}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(periodogram(t, SignalKind::position, 16).density.data());
}
BENCHMARK(BM_PositionPeriodogram);

static void BM_VelocityWelch(benchmark::State& state) {
    ModelParams p;
    p.duration = 100.0;
    RandomStream rng(1);
    const Trajectory t = simulate(p, SimulationOptions{}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(periodogram(t, SignalKind::velocity, 16).density.data());
}
BENCHMARK(BM_VelocityWelch);

static void BM_Predict(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(predict(p).sigma);
}
BENCHMARK(BM_Predict);
BENCHMARK_MAIN();
