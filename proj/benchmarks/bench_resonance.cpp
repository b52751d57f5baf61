#include <benchmark/benchmark.h>

#include <cmath>

#include "impactres/resonance.hpp"

using namespace impactres;

namespace {

const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};

AveragedField field() {
    return make_averaged_field(cfg, forcing, find_resonance(cfg, 1.5, 1, 1));
}

}  // namespace

static void BM_f0_closed_form(benchmark::State& state) {
    const AveragedField f = field();
    double eta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f0(eta, 0.4, f));
        eta += 0.13;
    }
}
BENCHMARK(BM_f0_closed_form);

static void BM_f0_numeric(benchmark::State& state) {
    const AveragedField f = field();
    double eta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f0_numeric(eta, 0.4, f));
        eta += 0.13;
    }
}
BENCHMARK(BM_f0_numeric);

static void BM_equilibria_256(benchmark::State& state) {
    const AveragedField f = field();
    const auto grid = f.tau_grid(256);
    for (auto _ : state) benchmark::DoNotOptimize(equilibria(f, grid));
}
BENCHMARK(BM_equilibria_256);

static void BM_coefficients_per_tau_point(benchmark::State& state) {
    const AveragedField f = field();
    const auto grid = f.tau_grid(4);
    const auto branches = equilibria(f, grid);
    for (auto _ : state)
        benchmark::DoNotOptimize(coefficients(branches[1], f, grid));
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_coefficients_per_tau_point);
