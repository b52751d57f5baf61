#include <cmath>

#include <doctest.h>

#include "impactres/resonance.hpp"
#include "oracles.hpp"

using namespace impactres;

namespace {

const OscillatorConfig canonical_cfg{1.0, 1.0, 0.1, 0.005};
const ForcingSpec canonical_forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
const double j_star = 2.0 * std::sqrt(3.0);

AveragedField canonical_field() {
    return make_averaged_field(canonical_cfg, canonical_forcing,
                               find_resonance(canonical_cfg, 1.5, 1, 1));
}

// n = 2 variant: nu = 3, gamma = 0.05, same resonant impulse.
AveragedField n2_field() {
    OscillatorConfig cfg = canonical_cfg;
    cfg.gamma = 0.05;
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 3.0, 1.0};
    return make_averaged_field(cfg, forcing, find_resonance(cfg, 3.0, 1, 2));
}

}  // namespace

TEST_CASE("find_resonance by closed-form inversion, checked by bisection") {
    const ResonancePoint rp = find_resonance(canonical_cfg, 1.5, 1, 1);
    CHECK(rp.j_pq == doctest::Approx(j_star).epsilon(1e-14));
    CHECK(rp.omega0_prime == doctest::Approx(9.0 / (32.0 * M_PI)).epsilon(1e-14));
    CHECK(rp.mu == doctest::Approx(std::sqrt(0.005)).epsilon(1e-15));

    const double j_bisect = oracles::bisect(
        [&](double j) { return omega0_of_impulse(j, canonical_cfg) - 1.5; }, 1e-9, 1e3);
    CHECK(rp.j_pq == doctest::Approx(j_bisect).epsilon(1e-10));

    // target omega0 = 0.75 < Omega: outside the delta > 0 band
    CHECK_THROWS_AS(find_resonance(canonical_cfg, 1.5, 1, 2), NoResonance);

    OscillatorConfig neg = canonical_cfg;
    neg.delta = -1.0;
    const ResonancePoint rn = find_resonance(neg, 4.0, 1, 1);
    CHECK(rn.j_pq == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rn.omega0_prime == doctest::Approx(-4.0 / M_PI).epsilon(1e-14));

    OscillatorConfig zero = canonical_cfg;
    zero.delta = 0.0;
    CHECK_THROWS_AS(find_resonance(zero, 1.5, 1, 1), NoResonance);
    CHECK_THROWS_AS(find_resonance(zero, 2.0, 1, 1), DegenerateResonance);

    CHECK_THROWS_AS(find_resonance(canonical_cfg, 1.5, 2, 4), DomainError);  // gcd != 1
}

TEST_CASE("f0 closed form agrees with its quadrature") {
    const AveragedField field = canonical_field();

    // frozen from the quadrature oracle: C cos(eta) - D with
    // C = -1.7188733854, D = 0.2309401077 + gamma*delta*omega0/pi
    CHECK(f0(0.0, 0.0, field) == doctest::Approx(-1.997559976).epsilon(1e-9));
    CHECK(std::abs(f0(0.0, 0.0, field) - f0_numeric(0.0, 0.0, field)) < 1e-8);

    double sup = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 8; ++k) {
            const double eta = two_pi * i / 8.0;
            const double tau = two_pi * k / 8.0;
            sup = std::max(sup,
                           std::abs(f0(eta, tau, field) - f0_numeric(eta, tau, field)));
        }
    CHECK(sup < 1e-8);

    // equilibrium definition: f0 vanishes where cos(n eta - beta) = A_n
    const double eta0 = std::acos(a_n(0.0, field));
    CHECK(std::abs(f0(eta0, 0.0, field)) < 1e-12);
}

TEST_CASE("f0_numeric decomposes into damping and forcing parts") {
    // gamma-only: zero-amplitude fast harmonic leaves -4 gamma J omega0^2 <kappa_psi^2>
    OscillatorConfig cfg = canonical_cfg;
    const ForcingSpec no_force = DistinctFrequencies{0.0, 0.0, 1.5, 1.0, 0.0};
    const AveragedField field =
        make_averaged_field(cfg, no_force, find_resonance(cfg, 1.5, 1, 1));
    const double damping_only = f0_numeric(1.234, 0.0, field);
    const double expected =
        -4.0 * cfg.gamma * j_star * 1.5 * 1.5 *
        GreensKernel(cfg, j_star).mean_kappa_psi_sq();
    CHECK(damping_only == doctest::Approx(expected).epsilon(1e-10));

    // forcing-only: gamma -> 0 leaves the resonant Fourier term
    cfg.gamma = 1e-12;
    const AveragedField weak = make_averaged_field(cfg, canonical_forcing,
                                                   find_resonance(cfg, 1.5, 1, 1));
    const double coeff = 2.0 * 1.5 * 1.5 * 1.5 / (M_PI * (1.0 - 1.5 * 1.5));
    CHECK(f0_numeric(0.0, 0.0, weak) == doctest::Approx(coeff).epsilon(1e-6));
}

TEST_CASE("A_n values and scaling") {
    const AveragedField field = canonical_field();
    // frozen from the f0 root oracle
    CHECK(a_n(0.0, field) == doctest::Approx(-0.162133286).epsilon(1e-7));
    CHECK(a_n(M_PI, field) == doctest::Approx(3.0 * -0.162133286).epsilon(1e-7));

    // oracle: solve f0(eta, 0) = 0 for cos(eta)
    const double root = oracles::bisect(
        [&](double eta) { return f0(eta, 0.0, field); }, 0.1, M_PI);
    CHECK(a_n(0.0, field) == doctest::Approx(std::cos(root)).epsilon(1e-10));

    CHECK(a_n(0.0, n2_field()) == doctest::Approx(-0.259413).epsilon(1e-6));

    // linear in gamma: doubling gamma doubles A_n exactly
    OscillatorConfig twice = canonical_cfg;
    twice.gamma = 2.0 * canonical_cfg.gamma;
    const AveragedField f2 = make_averaged_field(twice, canonical_forcing,
                                                 find_resonance(twice, 1.5, 1, 1));
    for (double tau : {0.0, 0.7, 2.9, 5.1})
        CHECK(a_n(tau, f2) == 2.0 * a_n(tau, field));

    // inversely proportional to E(tau)
    const Envelope e0 = field.envelope_at(0.0);
    const Envelope e1 = field.envelope_at(1.3);
    CHECK(a_n(1.3, field) * e1.e_val ==
          doctest::Approx(a_n(0.0, field) * e0.e_val).epsilon(1e-12));
}

TEST_CASE("equilibria: branch count, residuals, and failure mode") {
    const AveragedField field = canonical_field();
    const auto grid = field.tau_grid(256);
    const auto branches = equilibria(field, grid);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].sign_branch == 1);
    CHECK(branches[1].sign_branch == -1);
    CHECK(branches[0].eta0[0] == doctest::Approx(1.7336485).epsilon(1e-6));
    CHECK(branches[1].eta0[0] == doctest::Approx(4.5495368).epsilon(1e-6));

    double residual = 0.0;
    for (const auto& br : branches)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            residual = std::max(residual, std::abs(f0(br.eta0[i], grid[i], field)));
            CHECK(br.eta0[i] > 0.0);
            CHECK(br.eta0[i] < two_pi);
        }
    CHECK(residual <= 1e-10);

    // oracle: bisection finds exactly 2n roots of f0 on [0, 2 pi)
    const auto roots = oracles::scan_roots(
        [&](double eta) { return f0(eta, 0.0, field); }, 0.0, two_pi);
    CHECK(roots.size() == 2);

    const auto n2 = n2_field();
    const auto branches2 = equilibria(n2, n2.tau_grid(64));
    REQUIRE(branches2.size() == 4);
    const auto roots2 = oracles::scan_roots(
        [&](double eta) { return f0(eta, 0.0, n2); }, 0.0, two_pi);
    CHECK(roots2.size() == 4);
    // same-sign branches sit 2 pi / n apart
    CHECK(wrap_two_pi(branches2[2].eta0[0] - branches2[0].eta0[0]) ==
          doctest::Approx(M_PI).epsilon(1e-12));

    // gamma = 1 pushes |A_n| beyond 1: no uniformly solvable branch
    OscillatorConfig heavy = canonical_cfg;
    heavy.gamma = 1.0;
    const AveragedField no_branch = make_averaged_field(
        heavy, canonical_forcing, find_resonance(heavy, 1.5, 1, 1));
    CHECK_THROWS_AS(equilibria(no_branch, no_branch.tau_grid(64)), NoUniformBranch);
}

TEST_CASE("f0_eta closed form, sign split, and finite-difference oracle") {
    const AveragedField field = canonical_field();
    CHECK(f0_eta(field, +1, 0.0) == doctest::Approx(1.6961307).epsilon(1e-6));
    CHECK(f0_eta(field, -1, 0.0) == doctest::Approx(-1.6961307).epsilon(1e-6));

    const auto grid = field.tau_grid(32);
    const auto branches = equilibria(field, grid);
    for (const auto& br : branches) {
        for (double tau : {grid[0], grid[9], grid[21]}) {
            const double eta0 = br.eta_at(tau, field);
            const double fd = oracles::central_diff(
                [&](double eta) { return f0(eta, tau, field); }, eta0, 1e-6);
            CHECK(std::abs(f0_eta(field, br.sign_branch, tau) - fd) < 1e-7);
        }
        // tau-uniform sign
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double a = f0_eta(field, br.sign_branch, grid[i]);
            CHECK(a * br.sign_branch > 0.0);
        }
    }
}

TEST_CASE("coefficients: consistency and independent oracles") {
    const AveragedField field = canonical_field();
    const auto grid = field.tau_grid(32);
    const auto branches = equilibria(field, grid);
    const auto& minus = branches[1];
    const Coefficients co = coefficients(minus, field, grid);

    CHECK(co.d == doctest::Approx(9.0 / (32.0 * M_PI)).epsilon(1e-14));

    // a matches f0_eta at every grid point
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(co.a[i] - f0_eta(field, minus.sign_branch, grid[i])) < 1e-9);

    // b against the J-finite-difference of the averaged W (independent of
    // the analytic kappa_psi_j route used inside f1_numeric)
    for (std::size_t i : {std::size_t(0), std::size_t(11), std::size_t(23)}) {
        const double eta0 = minus.eta_at(grid[i], field);
        CHECK(std::abs(co.b[i] - oracles::f1_by_fd(eta0, grid[i], field)) < 1e-6);
    }

    // e against the closed-form resonant-mode oracle
    for (std::size_t i : {std::size_t(0), std::size_t(7), std::size_t(19)})
        CHECK(std::abs(co.e[i] - oracles::e_closed_form(field, grid[i])) < 1e-6);

    // frozen canonical values (quadrature-verified this session)
    CHECK(co.b[0] == doctest::Approx(-0.0627956).epsilon(1e-5));
    CHECK(co.e[0] == doctest::Approx(-0.0372044).epsilon(1e-5));

    // c at the equilibrium: -(1/2) C n^2 A_n
    const Envelope env = field.envelope_at(grid[5]);
    const double coeff = 2.0 * env.e_val * 1.5 * 1.5 / (M_PI * (1.0 - 2.25));
    CHECK(co.c[5] == doctest::Approx(-0.5 * coeff * a_n(grid[5], field)).epsilon(1e-12));
}

TEST_CASE("mean growth <b+e> equals -gamma (averaged phase-space divergence)") {
    // The averaged trace of the linearization must reproduce the physical
    // contraction rate -epsilon gamma, i.e. <b + e> = -gamma exactly; this
    // pins the whole F1/G0 quadrature chain in one number.
    const AveragedField field = canonical_field();
    const auto grid = field.tau_grid(32);
    const auto branches = equilibria(field, grid);
    for (const auto& br : branches) {
        const Coefficients co = coefficients(br, field, grid);
        double be = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) be += co.b[i] + co.e[i];
        be /= grid.size();
        CHECK(be == doctest::Approx(-canonical_cfg.gamma).epsilon(1e-7));
    }

    const auto n2 = n2_field();
    const auto grid2 = n2.tau_grid(16);
    const auto branches2 = equilibria(n2, grid2);
    const Coefficients co2 = coefficients(branches2[1], n2, grid2);
    CHECK(mean_growth(co2) == doctest::Approx(-0.05).epsilon(1e-7));
    CHECK(std::abs(mean_h_log_derivative(co2)) < 1e-10);
}

TEST_CASE("stability classification of the branches") {
    const AveragedField field = canonical_field();
    const auto grid = field.tau_grid(32);
    auto branches = equilibria(field, grid);
    const Coefficients co_plus = coefficients(branches[0], field, grid);
    const Coefficients co_minus = coefficients(branches[1], field, grid);

    CHECK(classify(branches[0], co_plus) == Stability::UnstableThm1);
    CHECK(classify(branches[1], co_minus) == Stability::StableThm2);
    CHECK(mean_growth(co_minus) < 0.0);
    CHECK_THROWS_AS(mean_growth(co_plus), DomainError);  // h undefined, a*d > 0

    // delta < 0 flips which arccos branch is the saddle
    OscillatorConfig neg = canonical_cfg;
    neg.delta = -1.0;
    const ForcingSpec forcing4 = CloseFrequencies{1.0, 0.5, 4.0, 1.0};
    const AveragedField fneg =
        make_averaged_field(neg, forcing4, find_resonance(neg, 4.0, 1, 1));
    const auto gridn = fneg.tau_grid(16);
    auto bn = equilibria(fneg, gridn);
    CHECK(classify(bn[0], coefficients(bn[0], fneg, gridn)) == Stability::StableThm2);
    CHECK(classify(bn[1], coefficients(bn[1], fneg, gridn)) == Stability::UnstableThm1);
}

TEST_CASE("distinct-frequency forcing: constant coefficients") {
    const ForcingSpec distinct = DistinctFrequencies{1.5, 1.0, 1.5, 1.0, 0.3};
    const AveragedField field = make_averaged_field(
        canonical_cfg, distinct, find_resonance(canonical_cfg, 1.5, 1, 1));
    const auto grid = field.tau_grid(16);
    const auto branches = equilibria(field, grid);
    for (const auto& br : branches)
        for (std::size_t i = 1; i < grid.size(); ++i)
            CHECK(br.eta0[i] == doctest::Approx(br.eta0[0]).epsilon(1e-14));

    const Coefficients co = coefficients(branches[1], field, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(co.b[i] == doctest::Approx(co.b[0]).epsilon(1e-10));
        CHECK(co.e[i] == doctest::Approx(co.e[0]).epsilon(1e-10));
    }
    CHECK(mean_growth(co) == doctest::Approx(co.b[0] + co.e[0]).epsilon(1e-8));
}

TEST_CASE("q != 1 resonances carry no averaged forcing") {
    // omega0 target = (2/3)*2.4 = 1.6 inside the band, but q = 2 decouples
    const ResonancePoint rp = find_resonance(canonical_cfg, 2.4, 2, 3);
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 2.4, 1.0};
    const AveragedField field = make_averaged_field(canonical_cfg, forcing, rp);
    CHECK_FALSE(field.coupled);
    CHECK(f0(1.0, 0.0, field) < 0.0);
    CHECK(f0(1.0, 0.0, field) == doctest::Approx(f0(2.5, 3.0, field)));
    CHECK_THROWS_AS(equilibria(field, field.tau_grid(8)), NoUniformBranch);
}
