#include "impactres/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "impactres/quadrature.hpp"

namespace impactres {

ResonancePoint find_resonance(const OscillatorConfig& config, double nu, int q, int p) {
    config.validate();
    if (q < 1 || p < 1) throw DomainError("find_resonance: p, q must be positive");
    if (std::gcd(p, q) != 1) throw DomainError("find_resonance: p, q must be coprime");
    if (!(nu > 0.0)) throw DomainError("find_resonance: nu must be > 0");

    const double target = nu * q / p;
    const double om = config.big_omega;
    if (config.delta == 0.0) {
        if (std::abs(target - 2.0 * om) <= 1e-12 * om)
            throw DegenerateResonance(
                "find_resonance: delta = 0, omega0 = 2*Omega with omega0' = 0; "
                "the non-degeneracy condition fails");
        throw NoResonance("find_resonance: delta = 0 admits only omega0 = 2*Omega");
    }
    if (config.delta > 0.0) {
        if (!(target > om && target < 2.0 * om))
            throw NoResonance("find_resonance: (q/p) nu outside (Omega, 2*Omega)");
    } else {
        if (!(target > 2.0 * om))
            throw NoResonance("find_resonance: (q/p) nu outside (2*Omega, inf)");
    }

    ResonancePoint rp;
    rp.p = p;
    rp.q = q;
    rp.nu = nu;
    rp.j_pq = impulse_of_frequency(target, config);
    rp.omega0_prime = omega0_prime(rp.j_pq, config);
    rp.mu = std::sqrt(config.epsilon);
    return rp;
}

Envelope AveragedField::envelope_at(double tau) const {
    if (std::holds_alternative<CloseFrequencies>(forcing)) return envelope(forcing, tau);
    const auto& df = std::get<DistinctFrequencies>(forcing);
    return {df.amp_a, df.theta};
}

std::vector<double> AveragedField::tau_grid(int samples) const {
    const double period = two_pi / forcing_big_gamma(forcing);
    std::vector<double> grid(samples);
    for (int i = 0; i < samples; ++i) grid[i] = period * i / samples;
    return grid;
}

AveragedField make_averaged_field(const OscillatorConfig& config,
                                  const ForcingSpec& forcing, const ResonancePoint& rp) {
    validate(forcing);
    if (std::abs(forcing_nu(forcing) - rp.nu) > 1e-12 * std::max(1.0, rp.nu))
        throw DomainError("make_averaged_field: forcing nu differs from the resonance nu");
    AveragedField field;
    field.config = config;
    field.forcing = forcing;
    field.rp = rp;
    field.n = rp.p;
    field.coupled = (rp.q == 1);
    return field;
}

namespace {

/// Damping part of f0: 4 gamma J omega0^2 * mean(kappa_psi^2), which reduces
/// to (gamma J/2)(1 + 4 Omega^2 delta^2 / J^2) + gamma delta omega0 / pi via
/// csc^2(pi Omega0) = 1 + 4 Omega^2 delta^2 / J^2 and cot(pi Omega0) = -2 Omega delta / J.
double damping_term(const AveragedField& field) {
    const double j = field.rp.j_pq;
    const double w0 = field.rp.ratio();
    const double od = field.config.big_omega * field.config.delta;
    return 0.5 * field.config.gamma * j * (1.0 + 4.0 * od * od / (j * j)) +
           field.config.gamma * field.config.delta * w0 / M_PI;
}

/// Coefficient of cos(n eta - beta) in f0: 2 E nu^2 / (pi n (Omega^2 - nu^2)).
double forcing_coefficient(const AveragedField& field, double e_val) {
    const double nu = field.rp.nu;
    const double om = field.config.big_omega;
    return 2.0 * e_val * nu * nu /
           (M_PI * field.n * (om * om - nu * nu));
}

/// Mean over the common period 2*pi*p/(q*nu) of integrand(t), splitting the
/// interval at the kappa_psi jump time (psi(t) = eta + (q/p) nu t crossing 0
/// mod 2*pi).
double common_period_mean(const AveragedField& field, double eta,
                          const std::function<double(double)>& integrand) {
    const double rate = field.rp.ratio();
    const double period = two_pi / rate;
    std::vector<double> cuts;
    const double eta_red = reduce_phase(eta);
    if (eta_red > 1e-12) cuts.push_back((two_pi - eta_red) / rate);
    return integrate_piecewise(integrand, 0.0, period, cuts) / period;
}

}  // namespace

double f0(double eta, double tau, const AveragedField& field) {
    const double damp = damping_term(field);
    if (!field.coupled) return -damp;
    const Envelope env = field.envelope_at(tau);
    return forcing_coefficient(field, env.e_val) *
               std::cos(field.n * eta - env.beta_val) -
           damp;
}

double f0_numeric(double eta, double tau, const AveragedField& field) {
    const GreensKernel kernel(field.config, field.rp.j_pq);
    const double w0 = kernel.omega0();
    const double gj = field.config.gamma * field.rp.j_pq;
    const double rate = field.rp.ratio();
    const auto integrand = [&](double t) {
        const double kp = kernel.kappa_psi(eta + rate * t);
        const double f = force(field.forcing, t, tau);
        return -4.0 * w0 * (f + gj * w0 * kp) * kp;
    };
    return common_period_mean(field, eta, integrand);
}

double a_n(double tau, const AveragedField& field) {
    if (!field.coupled)
        throw DomainError("a_n: forcing couples only at q = 1 resonances");
    const Envelope env = field.envelope_at(tau);
    return damping_term(field) / forcing_coefficient(field, env.e_val);
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::UnstableThm1: return "unstable_thm1";
        case Stability::StableThm2: return "stable_thm2";
        case Stability::UnstableThm2: return "unstable_thm2";
        case Stability::Indeterminate: return "indeterminate";
    }
    return "?";
}

double EquilibriumBranch::eta_at(double tau_value, const AveragedField& field) const {
    const Envelope env = field.envelope_at(tau_value);
    const double an = impactres::a_n(tau_value, field);
    if (!(std::abs(an) < 1.0))
        throw NoUniformBranch("eta_at: |A_n(tau)| >= 1");
    return wrap_two_pi((env.beta_val + sign_branch * std::acos(an) + two_pi * l) /
                       field.n);
}

std::vector<EquilibriumBranch> equilibria(const AveragedField& field,
                                          const std::vector<double>& tau_grid) {
    if (!field.coupled)
        throw NoUniformBranch(
            "equilibria: q != 1, the averaged forcing vanishes and f0 < 0 has no zero");
    if (tau_grid.empty()) throw DomainError("equilibria: empty tau grid");

    std::vector<double> an(tau_grid.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        an[i] = a_n(tau_grid[i], field);
        max_abs = std::max(max_abs, std::abs(an[i]));
    }
    if (!(max_abs < 1.0))
        throw NoUniformBranch("equilibria: max_tau |A_n| = " + std::to_string(max_abs) +
                              " >= 1, no uniformly solvable phase");

    std::vector<EquilibriumBranch> branches;
    branches.reserve(2 * field.n);
    for (int l = 0; l < field.n; ++l) {
        for (int sign : {+1, -1}) {
            EquilibriumBranch br;
            br.l = l;
            br.sign_branch = sign;
            br.tau = tau_grid;
            br.a_n = an;
            br.eta0.resize(tau_grid.size());
            for (std::size_t i = 0; i < tau_grid.size(); ++i) {
                const Envelope env = field.envelope_at(tau_grid[i]);
                br.eta0[i] = wrap_two_pi(
                    (env.beta_val + sign * std::acos(an[i]) + two_pi * l) / field.n);
            }
            branches.push_back(std::move(br));
        }
    }
    return branches;
}

double f0_eta(const AveragedField& field, int sign_branch, double tau) {
    const Envelope env = field.envelope_at(tau);
    const double an = a_n(tau, field);
    const double coeff = forcing_coefficient(field, env.e_val);
    // d/d(eta) [C cos(n eta - beta)] at n eta0 - beta = sign*arccos(A_n):
    // -C n sin(...) = -C n sign sqrt(1 - A_n^2)
    return -coeff * field.n * sign_branch * std::sqrt(1.0 - an * an);
}

double f1_numeric(double eta, double tau, const AveragedField& field) {
    const GreensKernel kernel(field.config, field.rp.j_pq);
    const double w0 = kernel.omega0();
    const double w0p = field.rp.omega0_prime;
    const double ga = field.config.gamma;
    const double j = field.rp.j_pq;
    const double rate = field.rp.ratio();
    const auto integrand = [&](double t) {
        const double psi = eta + rate * t;
        const double kp = kernel.kappa_psi(psi);
        const double kpj = kernel.kappa_psi_j(psi);
        const double f = force(field.forcing, t, tau);
        // d/dJ of W = omega0 [f + gamma J omega0 kappa_psi] kappa_psi
        const double dw = w0p * f * kp + w0 * f * kpj + ga * w0 * w0 * kp * kp +
                          2.0 * ga * j * w0 * w0p * kp * kp +
                          2.0 * ga * j * w0 * w0 * kp * kpj;
        return -4.0 * dw;
    };
    return common_period_mean(field, eta, integrand);
}

double g0_numeric(double eta, double tau, const AveragedField& field) {
    const GreensKernel kernel(field.config, field.rp.j_pq);
    const double w0 = kernel.omega0();
    const double ga = field.config.gamma;
    const double j = field.rp.j_pq;
    const double rate = field.rp.ratio();
    const auto integrand = [&](double t) {
        const double psi = eta + rate * t;
        const double kp = kernel.kappa_psi(psi);
        const double f = force(field.forcing, t, tau);
        return -4.0 * w0 / j * (f + ga * j * w0 * kp) *
               (-kernel.kappa(psi) - j * kernel.kappa_j(psi));
    };
    return common_period_mean(field, eta, integrand);
}

Coefficients coefficients(const EquilibriumBranch& branch, const AveragedField& field,
                          const std::vector<double>& tau_grid) {
    constexpr double eta_step = 1e-5;  // centered difference for e = g0_eta
    Coefficients co;
    co.tau = tau_grid;
    co.d = field.rp.omega0_prime;
    const std::size_t m = tau_grid.size();
    co.a.resize(m);
    co.b.resize(m);
    co.c.resize(m);
    co.e.resize(m);
    co.h.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double tau = tau_grid[i];
        const double eta0 = branch.eta_at(tau, field);
        const Envelope env = field.envelope_at(tau);
        const double an = a_n(tau, field);
        co.a[i] = f0_eta(field, branch.sign_branch, tau);
        // c = (1/2) f0_etaeta = -(1/2) C n^2 cos(n eta0 - beta) = -(1/2) C n^2 A_n
        co.c[i] = -0.5 * forcing_coefficient(field, env.e_val) * field.n * field.n * an;
        co.b[i] = f1_numeric(eta0, tau, field);
        co.e[i] = (g0_numeric(eta0 + eta_step, tau, field) -
                   g0_numeric(eta0 - eta_step, tau, field)) /
                  (2.0 * eta_step);
        const double ad = co.a[i] * co.d;
        co.h[i] = ad < 0.0 ? std::sqrt(-co.d / co.a[i]) :
                             std::numeric_limits<double>::quiet_NaN();
    }
    return co;
}

double mean_h_log_derivative(const Coefficients& coeffs) {
    const std::size_t m = coeffs.h.size();
    if (m < 2) throw DomainError("mean_h_log_derivative: grid too small");
    // <h'/h> as the periodic mean of d(log h)/d(tau); the forward-difference
    // sum telescopes, mirroring the continuous integral over one period.
    const double dtau = coeffs.tau[1] - coeffs.tau[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double h0 = coeffs.h[i];
        const double h1 = coeffs.h[(i + 1) % m];
        if (!(h0 > 0.0) || !(h1 > 0.0))
            throw DomainError("mean_h_log_derivative: h undefined (a*d >= 0 somewhere)");
        sum += std::log(h1) - std::log(h0);
    }
    return sum / (m * dtau);
}

double mean_growth(const Coefficients& coeffs) {
    const std::size_t m = coeffs.b.size();
    if (m == 0) throw DomainError("mean_growth: empty coefficient grid");
    for (double h : coeffs.h)
        if (!(h > 0.0))
            throw DomainError("mean_growth: h undefined (a*d >= 0 somewhere on the grid)");
    const double hcheck = mean_h_log_derivative(coeffs);
    if (std::abs(hcheck) > 1e-10)
        throw NumericalError("mean_growth: <h'/h> does not vanish");
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += coeffs.b[i] + coeffs.e[i];
    return sum / m;
}

Stability classify(const EquilibriumBranch& branch, const Coefficients& coeffs,
                   double tol) {
    (void)branch;
    double min_da = std::numeric_limits<double>::infinity();
    double max_da = -std::numeric_limits<double>::infinity();
    for (double a : coeffs.a) {
        min_da = std::min(min_da, a * coeffs.d);
        max_da = std::max(max_da, a * coeffs.d);
    }
    if (min_da > 0.0) return Stability::UnstableThm1;
    if (max_da < 0.0) {
        const double be = mean_growth(coeffs);
        if (be < -tol) return Stability::StableThm2;
        if (be > tol) return Stability::UnstableThm2;
        return Stability::Indeterminate;
    }
    return Stability::Indeterminate;
}

}  // namespace impactres
