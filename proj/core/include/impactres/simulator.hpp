#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "impactres/model.hpp"
#include "impactres/resonance.hpp"

namespace impactres {

struct SimState {
    double t = 0.0;
    double x = 0.0;  ///< position, <= delta
    double v = 0.0;  ///< velocity
};

struct SimOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double graze_tol = 1e-8;     ///< v_minus below this flags a grazing impact
    std::int64_t max_events = 0; ///< stop after this many impacts (0 = no cap)
    int samples_stride = 0;      ///< record (t,x,v) every N accepted steps (0 = off)
};

/// One elastic impact: velocity reversed at x = delta.
struct ImpactEvent {
    double t_alpha = 0.0;   ///< impact time
    double v_minus = 0.0;   ///< pre-impact velocity > 0
    double j_alpha = 0.0;   ///< impulse, exactly 2 * v_minus
    bool grazing = false;
};

struct Sample {
    double t, x, v;
};

struct Trajectory {
    std::vector<ImpactEvent> events;
    std::vector<Sample> samples;
    OscillatorConfig config;
    ForcingSpec forcing;
    SimState initial;
    SimState final_state;
};

/// Event-driven integration of the perturbed system
///   x'' = -Omega^2 x + epsilon (f(t, epsilon t) - gamma x')
/// between impacts (adaptive embedded Runge-Kutta 5(4), step capped at
/// T0/50), with each upcrossing of x = delta localized to |x - delta| <=
/// 1e-11 and a time window <= 1e-12, then reflected v -> -v.
/// Identical inputs produce identical event sequences bit for bit.
Trajectory simulate(const OscillatorConfig& config, const ForcingSpec& forcing,
                    const SimState& initial, double horizon,
                    const SimOptions& opts = {});

/// Per-impact observables in the resonance frame.
struct Observation {
    double t_alpha;   ///< impact time
    double j_alpha;   ///< impulse 2 v_minus
    double t_period;  ///< inter-impact period (NaN for the first event)
    double eta_hat;   ///< (-(q/p) nu t_alpha) mod 2*pi
};

/// Throws InsufficientData unless the trajectory has at least 2 events.
std::vector<Observation> observables(const Trajectory& traj, const ResonancePoint& rp);

/// Phase-locking diagnosis over the trailing window of a run.
struct LockReport {
    bool locked = false;
    double mean_impulse = 0.0;
    double circ_std = 0.0;    ///< circular std of n*eta_hat - beta(eps t) (rad)
    double phase_mean = 0.0;  ///< circular mean of the same quantity
    std::optional<std::size_t> matched_branch;  ///< index into `branches`
};

/// locked iff circ_std < threshold and |mean J - J_pq| < 5 sqrt(epsilon).
/// matched_branch minimizes the circular distance between the measured
/// phase mean and the branch phase n*eta0(tau) - beta(tau).
LockReport lock_report(const std::vector<Observation>& obs, const AveragedField& field,
                       const std::vector<EquilibriumBranch>& branches,
                       double window, double threshold = 0.15);

/// Initial state "on a branch": an impact with J = J_pq + impulse_offset,
/// at a time where the resonance-frame phase equals the branch phase plus
/// phase_offset. Reproducible basin probes start here.
SimState branch_start_state(const AveragedField& field, const EquilibriumBranch& branch,
                            double phase_offset = 0.0, double impulse_offset = 0.0);

// Circular statistics helpers (also used by the lock diagnostics).
double circular_mean(const std::vector<double>& angles);
double circular_std(const std::vector<double>& angles);
double circular_distance(double a, double b);  ///< |wrap_pm_pi(a - b)|

}  // namespace impactres
