#pragma once

#include <variant>

#include "impactres/errors.hpp"

namespace impactres {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Wrap an angle into [0, 2*pi).
double wrap_two_pi(double angle);

/// Signed angular difference wrapped into (-pi, pi].
double wrap_pm_pi(double angle);

/// Physical parameters of the damped impact oscillator
///   x'' + Omega^2 x + Phi0(x, x') = epsilon * (f(t, tau) - gamma * x'),
/// with an immovable limiter at x = delta and elastic reflection there.
struct OscillatorConfig {
    double big_omega = 1.0;  ///< natural frequency Omega > 0
    double delta = 1.0;      ///< limiter position (any sign)
    double gamma = 0.1;      ///< viscous damping coefficient > 0
    double epsilon = 0.005;  ///< perturbation scale (>= 0; 0 = conservative run)

    /// Throws DomainError on invalid parameters; logs a warning for
    /// epsilon > 0.1 (outside the small-perturbation regime).
    void validate() const;
};

/// Biharmonic forcing, two close frequencies nu and nu + epsilon*big_gamma:
///   f(t, tau) = a1 sin(nu t) + a2 sin(nu t + big_gamma * tau).
struct CloseFrequencies {
    double a1 = 1.0;
    double a2 = 0.5;
    double nu = 1.5;
    double big_gamma = 1.0;
};

/// Biharmonic forcing with widely separated frequencies:
///   f(t, tau) = amp_a sin(nu t + theta) + amp_b sin(big_gamma * tau).
struct DistinctFrequencies {
    double amp_a = 1.5;
    double amp_b = 1.0;
    double nu = 1.5;
    double big_gamma = 1.0;
    double theta = 0.0;
};

using ForcingSpec = std::variant<CloseFrequencies, DistinctFrequencies>;

/// Throws DomainError on invalid parameters (a1 = a2 is rejected: the
/// envelope would touch zero and the averaged equations degenerate).
void validate(const ForcingSpec& forcing);

double forcing_nu(const ForcingSpec& forcing);
double forcing_big_gamma(const ForcingSpec& forcing);

/// Beat envelope of the close-frequency force at slow time tau:
///   f(t, tau) = e_val * sin(nu t + beta_val).
struct Envelope {
    double e_val;     ///< amplitude E(tau) >= |a1 - a2| > 0
    double beta_val;  ///< phase beta(tau) in [0, 2*pi)
};

/// Envelope (E, beta) of a CloseFrequencies forcing.
/// Throws VariantError for the distinct-frequency variant.
Envelope envelope(const ForcingSpec& forcing, double tau);

/// Force value f(t, tau). Slow time is passed explicitly; callers that
/// integrate the physical system use tau = epsilon * t.
double force(const ForcingSpec& forcing, double t, double tau);

}  // namespace impactres
