#include <benchmark/benchmark.h>

#include <cmath>

#include "impactres/simulator.hpp"

using namespace impactres;

namespace {

const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
const double j_star = 2.0 * std::sqrt(3.0);

// Start on the phase-locked branch so every run delivers the requested
// number of impacts (an arbitrary start can fall out of the impacting
// regime and idle until the horizon).
SimState locked_start() {
    const AveragedField field =
        make_averaged_field(cfg, forcing, find_resonance(cfg, 1.5, 1, 1));
    const auto branches = equilibria(field, field.tau_grid(64));
    return branch_start_state(field, branches[1]);
}

}  // namespace

static void BM_simulate_impacts(benchmark::State& state) {
    const SimState start = locked_start();
    SimOptions opts;
    opts.max_events = state.range(0);
    const double horizon = 6.0 * static_cast<double>(state.range(0)) + 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(cfg, forcing, start, horizon, opts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_impacts)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_conservative_impacts(benchmark::State& state) {
    OscillatorConfig cons = cfg;
    cons.epsilon = 0.0;
    SimOptions opts;
    opts.max_events = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate(cons, forcing, {0.0, 1.0, -0.5 * j_star}, 1.0e4, opts));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_conservative_impacts)->Unit(benchmark::kMillisecond);
