#pragma once

#include <vector>

#include "impactres/green.hpp"
#include "impactres/model.hpp"

namespace impactres {

/// Non-degenerate resonance omega0(J_pq) = (q/p) nu.
struct ResonancePoint {
    int p = 1;                 ///< coprime positive integers, forcing couples
    int q = 1;                 ///< at first order only for q = 1, p = n
    double nu = 0.0;           ///< forcing frequency
    double j_pq = 0.0;         ///< resonant impulse
    double omega0_prime = 0.0; ///< d(omega0)/dJ at J_pq (sign of delta)
    double mu = 0.0;           ///< sqrt(epsilon)

    double ratio() const { return nu * q / p; }  ///< (q/p) nu = omega0(J_pq)
};

/// Solve omega0(J) = (q/p) nu by closed-form inversion.
/// Throws NoResonance when the target lies outside the admissible band,
/// DegenerateResonance when delta = 0 and the target equals 2*Omega.
ResonancePoint find_resonance(const OscillatorConfig& config, double nu, int q, int p);

/// The averaged slow field around a resonance point. For q = 1, p = n the
/// forcing couples through the single resonant Fourier mode k = n; for any
/// other (p, q) the forcing term averages to zero and only damping remains.
struct AveragedField {
    OscillatorConfig config;
    ForcingSpec forcing;
    ResonancePoint rp;
    int n = 1;             ///< = p (meaningful when coupled)
    bool coupled = false;  ///< q == 1

    /// (E(tau), beta(tau)) for close frequencies; (amp_a, theta) constants
    /// for the distinct-frequency force.
    Envelope envelope_at(double tau) const;

    /// Uniform slow-time grid, `samples` points over one period 2*pi/big_gamma.
    std::vector<double> tau_grid(int samples = 256) const;
};

AveragedField make_averaged_field(const OscillatorConfig& config,
                                  const ForcingSpec& forcing,
                                  const ResonancePoint& rp);

/// Averaged impulse drift f0(eta, tau), closed form:
///   2 E nu^2 cos(n eta - beta) / (pi n (Omega^2 - nu^2))
///     - (gamma J/2)(1 + 4 Omega^2 delta^2 / J^2).
double f0(double eta, double tau, const AveragedField& field);

/// f0 by direct quadrature of F0 over the common period 2*pi*p/(q*nu),
/// split at the kappa_psi jump time. Cross-validates the closed form.
double f0_numeric(double eta, double tau, const AveragedField& field);

/// Normalized damping-to-forcing ratio A_n(tau) of the equilibrium equation
/// cos(n eta - beta(tau)) = A_n(tau). Negative at every admissible resonance.
double a_n(double tau, const AveragedField& field);

/// Stability of an equilibrium branch: first-order saddle instability, or
/// second-order mean-contraction analysis when the first order is neutral.
enum class Stability {
    UnstableThm1,   ///< omega0' * f0_eta uniformly positive
    StableThm2,     ///< a*d uniformly negative and <b + e> < 0
    UnstableThm2,   ///< a*d uniformly negative and <b + e> > 0
    Indeterminate,  ///< sign change over tau or <b + e> below tolerance
};

const char* to_string(Stability s);

/// One equilibrium phase curve eta_0l(tau) with its arccos branch sign.
struct EquilibriumBranch {
    int l = 0;           ///< 0 .. n-1
    int sign_branch = 1; ///< +1 or -1 arccos branch
    std::vector<double> tau;      ///< sampling grid
    std::vector<double> eta0;     ///< eta_0l(tau) in (0, 2*pi)
    std::vector<double> a_n;      ///< A_n(tau) samples
    Stability stability = Stability::Indeterminate;

    /// eta_0l at arbitrary tau: (beta(tau) + sign*arccos(A_n(tau)) + 2*l*pi)/n.
    double eta_at(double tau_value, const AveragedField& field) const;
};

/// All 2n sign-labeled equilibrium branches on the grid.
/// Throws NoUniformBranch when max_tau |A_n(tau)| >= 1 (existence condition
/// fails) or when the field is not forcing-coupled.
std::vector<EquilibriumBranch> equilibria(const AveragedField& field,
                                          const std::vector<double>& tau_grid);

/// a(tau) = f0_eta(eta_0(tau), tau), closed form with the branch sign.
double f0_eta(const AveragedField& field, int sign_branch, double tau);

/// Second-order averaged coefficients along one branch.
struct Coefficients {
    std::vector<double> tau;
    std::vector<double> a;  ///< f0_eta(eta0(tau), tau)
    std::vector<double> b;  ///< f1(eta0(tau), tau), by quadrature
    std::vector<double> c;  ///< (1/2) f0_etaeta(eta0(tau), tau)
    std::vector<double> e;  ///< g0_eta(eta0(tau), tau), by quadrature
    std::vector<double> h;  ///< sqrt(-d/a) where a*d < 0, NaN elsewhere
    double d = 0.0;         ///< omega0'(J_pq), constant in tau
};

Coefficients coefficients(const EquilibriumBranch& branch, const AveragedField& field,
                          const std::vector<double>& tau_grid);

/// f1(eta, tau): mean of F1 (the J-derivative of F0's bracket, evaluated
/// with the analytic kappa partials) over the common period.
double f1_numeric(double eta, double tau, const AveragedField& field);

/// g0(eta, tau): mean of G0 over the common period.
double g0_numeric(double eta, double tau, const AveragedField& field);

/// Trapezoidal mean of b(tau) + e(tau) over one slow period. Also checks
/// that <h'/h> vanishes (h positive periodic), which makes the averaged
/// diagonal term (1/2)[b + e - h'/h] have mean (1/2)<b + e>.
/// Throws DomainError when h is undefined (a*d >= 0 somewhere).
double mean_growth(const Coefficients& coeffs);

/// Discrete <h'/h> = mean of d(log h)/dtau over the periodic grid.
double mean_h_log_derivative(const Coefficients& coeffs);

/// Classify a branch: saddle (d*a uniformly positive) is unstable outright;
/// purely imaginary first order (d*a uniformly negative) defers to the sign
/// of <b + e> at tolerance `tol`.
Stability classify(const EquilibriumBranch& branch, const Coefficients& coeffs,
                   double tol = 1e-8);

}  // namespace impactres
