#include <benchmark/benchmark.h>

#include <cmath>

#include "impactres/green.hpp"

using namespace impactres;

namespace {
const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
const double j_star = 2.0 * std::sqrt(3.0);
}  // namespace

static void BM_kappa_closed_form(benchmark::State& state) {
    const GreensKernel kernel(cfg, j_star);
    double psi = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.kappa(psi));
        psi += 0.37;
    }
}
BENCHMARK(BM_kappa_closed_form);

static void BM_kappa_psi_closed_form(benchmark::State& state) {
    const GreensKernel kernel(cfg, j_star);
    double psi = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.kappa_psi(psi));
        psi += 0.37;
    }
}
BENCHMARK(BM_kappa_psi_closed_form);

static void BM_kappa_fourier_partial(benchmark::State& state) {
    const int terms = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kappa_fourier_partial(1.1, j_star, cfg, terms));
    state.SetComplexityN(terms);
}
BENCHMARK(BM_kappa_fourier_partial)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_omega0_round_trip(benchmark::State& state) {
    double w0 = 1.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(omega0_of_impulse(impulse_of_frequency(w0, cfg), cfg));
        w0 = 1.0 + std::fmod(w0, 0.999);
    }
}
BENCHMARK(BM_omega0_round_trip);

static void BM_phase_of_state(benchmark::State& state) {
    const GreensKernel kernel(cfg, j_star);
    const double x = -j_star * kernel.kappa(2.1);
    const double v = -j_star * kernel.omega0() * kernel.kappa_psi(2.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(phase_of_state(x, v, j_star, cfg));
}
BENCHMARK(BM_phase_of_state);
