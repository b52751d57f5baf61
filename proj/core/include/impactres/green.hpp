#pragma once

#include "impactres/model.hpp"

namespace impactres {

/// Side selector for kappa_psi at its jump points psi = 2*l*pi.
enum class JumpSide {
    TwoSided,  ///< reject jump points (JumpPointError)
    Above,     ///< limit from psi -> 0+ : +1/(2 omega0)
    Below,     ///< limit from psi -> 2pi- : -1/(2 omega0)
};

/// Reduce a phase into [0, 2*pi) with a 1e-12 guard band: values within
/// the band below 2*pi snap to 0 (the post-impact side 0+).
double reduce_phase(double psi);

// ---------------------------------------------------------------------------
// Frequency-impulse maps of the conservative impact oscillator
// ---------------------------------------------------------------------------

/// Frequency omega0(J) of the conservative impacting oscillation.
///   delta > 0 : pi*Omega / (pi - arctan(J / (2*Omega*delta)))
///   delta < 0 : -pi*Omega / arctan(J / (2*Omega*delta))
///   delta = 0 : 2*Omega (impulse-independent)
/// Requires J >= 0, and J > 0 when delta < 0.
double omega0_of_impulse(double j, const OscillatorConfig& config);

/// Inverse map J(omega0) = -2*Omega*delta*tan(Omega*T0/2), T0 = 2*pi/omega0.
/// omega0 must lie strictly inside the band for sign(delta);
/// delta = 0 throws DegenerateError (J is arbitrary at omega0 = 2*Omega).
double impulse_of_frequency(double omega0, const OscillatorConfig& config);

/// Analytic derivative d(omega0)/dJ. Positive for delta > 0, negative for
/// delta < 0, never zero on the open band. delta = 0 throws DegenerateError.
double omega0_prime(double j, const OscillatorConfig& config);

// ---------------------------------------------------------------------------
// Periodic Green's function kappa and derivatives
// ---------------------------------------------------------------------------

/// Cached conservative-system structure at fixed impulse J: the impacting
/// motion is x = -J kappa(psi, J), x' = -J omega0 kappa_psi(psi, J) with
/// impacts at psi = 2*l*pi.
class GreensKernel {
  public:
    GreensKernel(const OscillatorConfig& config, double j);

    double impulse() const { return j_; }
    double omega0() const { return omega0_; }
    double omega0_cap() const { return cap_; }  ///< Omega0 = Omega/omega0 in (0,1)
    double period() const { return period_; }   ///< T0 = 2*pi/omega0
    const OscillatorConfig& config() const { return config_; }

    /// Closed form (1/(2 Omega)) cos[Omega0 (psi - pi)] / sin(pi Omega0),
    /// psi reduced mod 2*pi. Continuous everywhere.
    double kappa(double psi) const;

    /// d(kappa)/d(psi). Jumps by 1/omega0 at psi = 2*l*pi; the side there
    /// must be selected explicitly, TwoSided throws JumpPointError.
    double kappa_psi(double psi, JumpSide side = JumpSide::TwoSided) const;

    /// d(kappa)/dJ at fixed psi, through Omega0(J). Zero when delta = 0.
    double kappa_j(double psi) const;

    /// d(kappa_psi)/dJ at fixed psi, same chain rule as kappa_j.
    double kappa_psi_j(double psi, JumpSide side = JumpSide::TwoSided) const;

    /// Period mean of kappa_psi^2: 1/(8 omega0^2 sin^2(pi Omega0)).
    double mean_kappa_psi_sq() const;

  private:
    OscillatorConfig config_;
    double j_;
    double omega0_;
    double cap_;
    double period_;
    double sin_pi_cap_;
};

// Convenience wrappers matching the kernel methods.
double kappa(double psi, double j, const OscillatorConfig& config);
double kappa_psi(double psi, double j, const OscillatorConfig& config,
                 JumpSide side = JumpSide::TwoSided);
double kappa_j(double psi, double j, const OscillatorConfig& config);
double mean_kappa_psi_sq(double j, const OscillatorConfig& config);

// ---------------------------------------------------------------------------
// Impulse/phase extraction from physical states
// ---------------------------------------------------------------------------

/// Impulse of the conservative orbit through (x, v):
/// J = 2 sqrt(v^2 + Omega^2 x^2 - Omega^2 delta^2).
/// Throws NonImpactingError when the energy is below the impact threshold.
double action_of_state(double x, double v, const OscillatorConfig& config);

/// Phase psi in [0, 2*pi) with x = -J kappa(psi), v = -J omega0 kappa_psi(psi).
/// Throws InconsistentStateError if (x, v) does not lie on the J-orbit
/// to within 1e-8 (relative).
double phase_of_state(double x, double v, double j, const OscillatorConfig& config);

// ---------------------------------------------------------------------------
// Fourier-series cross-check oracles (production evaluation uses the closed
// forms above; these exist to verify them through an independent route)
// ---------------------------------------------------------------------------

/// Partial sum of kappa's Fourier series:
/// omega0^-1 [1/(2 pi Omega0^2) + (1/pi) sum_k cos(k psi)/(Omega0^2 - k^2)].
double kappa_fourier_partial(double psi, double j, const OscillatorConfig& config,
                             int terms);

/// Fejer (Cesaro) mean of kappa_psi's Fourier series
/// -omega0^-1 (1/pi) sum_k k sin(k psi)/(Omega0^2 - k^2); the plain partial
/// sums converge too slowly (k^-1 tail) to be a usable cross-check.
double kappa_psi_fejer(double psi, double j, const OscillatorConfig& config,
                       int terms);

}  // namespace impactres
