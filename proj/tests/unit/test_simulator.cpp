#include <cmath>

#include <doctest.h>

#include "impactres/simulator.hpp"
#include "oracles.hpp"

using namespace impactres;

namespace {

const ForcingSpec quiet = DistinctFrequencies{0.0, 0.0, 1.5, 1.0, 0.0};
const double j_star = 2.0 * std::sqrt(3.0);

OscillatorConfig conservative(double delta) {
    return OscillatorConfig{1.0, delta, 0.1, 0.0};
}

}  // namespace

TEST_CASE("conservative flight at delta = 0: half-sine between impacts") {
    SimOptions opts;
    opts.max_events = 3;
    const Trajectory traj =
        simulate(conservative(0.0), quiet, {0.0, 0.0, -1.0}, 20.0, opts);
    REQUIRE(traj.events.size() >= 1);
    CHECK(traj.events[0].t_alpha == doctest::Approx(M_PI).epsilon(1e-10));
    CHECK(traj.events[0].v_minus == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(traj.events[0].j_alpha == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("conservative flight at delta = 1: period matches omega0") {
    SimOptions opts;
    opts.max_events = 2;
    const Trajectory traj =
        simulate(conservative(1.0), quiet, {0.0, 1.0, -std::sqrt(3.0)}, 20.0, opts);
    REQUIRE(traj.events.size() >= 1);
    // start is the post-impact state of a J = 2 sqrt(3) orbit (omega0 = 1.5)
    CHECK(traj.events[0].t_alpha == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-10));
    CHECK(traj.events[0].j_alpha == doctest::Approx(j_star).epsilon(1e-9));
}

TEST_CASE("conservative laws over 100 impacts, all limiter signs") {
    for (double delta : {1.0, -1.0, 0.0}) {
        const OscillatorConfig cfg = conservative(delta);
        const double j0 = delta < 0.0 ? 2.0 : (delta > 0.0 ? j_star : 1.0);
        const double period = two_pi / omega0_of_impulse(j0, cfg);
        SimOptions opts;
        opts.max_events = 101;
        opts.rtol = 1e-12;
        opts.atol = 1e-14;
        const Trajectory traj =
            simulate(cfg, quiet, {0.0, cfg.delta, -0.5 * j0}, 200.0 * period, opts);
        REQUIRE(traj.events.size() == 101);
        for (std::size_t i = 1; i < traj.events.size(); ++i) {
            CHECK(std::abs(traj.events[i].t_alpha - traj.events[i - 1].t_alpha -
                           period) < 1e-8);
            CHECK(std::abs(traj.events[i].j_alpha - j0) < 1e-9);
        }
    }
}

TEST_CASE("action_of_state is the flight invariant and equals 2 v_minus") {
    const OscillatorConfig cfg = conservative(1.0);
    SimOptions opts;
    opts.max_events = 5;
    opts.samples_stride = 7;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    const Trajectory traj =
        simulate(cfg, quiet, {0.0, 1.0, -std::sqrt(3.0)}, 25.0, opts);
    for (const auto& s : traj.samples) {
        if (std::abs(s.x - cfg.delta) < 1e-6) continue;  // grazing the threshold
        CHECK(std::abs(action_of_state(s.x, s.v, cfg) - j_star) < 1e-9);
    }
    for (const auto& ev : traj.events)
        CHECK(ev.j_alpha == doctest::Approx(2.0 * ev.v_minus));
}

TEST_CASE("interior of a flight stays strictly below the limiter") {
    SimOptions opts;
    opts.max_events = 6;
    opts.samples_stride = 3;
    const Trajectory traj =
        simulate(conservative(1.0), quiet, {0.0, 1.0, -std::sqrt(3.0)}, 30.0, opts);
    for (const auto& s : traj.samples) CHECK(s.x <= 1.0 + 1e-9);
    for (std::size_t i = 1; i < traj.events.size(); ++i)
        CHECK(traj.events[i].t_alpha > traj.events[i - 1].t_alpha);
}

TEST_CASE("damping only: impulse strictly decreasing") {
    OscillatorConfig cfg{1.0, 1.0, 0.1, 0.05};  // strong eps to make decay visible
    SimOptions opts;
    opts.max_events = 40;
    const Trajectory traj = simulate(cfg, quiet, {0.0, 1.0, -2.0}, 400.0, opts);
    REQUIRE(traj.events.size() >= 10);
    for (std::size_t i = 1; i < traj.events.size(); ++i)
        CHECK(traj.events[i].j_alpha < traj.events[i - 1].j_alpha);
}

TEST_CASE("determinism: identical options give identical event sequences") {
    const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
    SimOptions opts;
    opts.max_events = 60;
    const SimState start{0.0, 1.0, -0.5 * j_star};
    const Trajectory a = simulate(cfg, forcing, start, 400.0, opts);
    const Trajectory b = simulate(cfg, forcing, start, 400.0, opts);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].t_alpha == b.events[i].t_alpha);
        CHECK(a.events[i].v_minus == b.events[i].v_minus);
    }
}

TEST_CASE("a boundary state moving into the wall reflects immediately") {
    SimOptions opts;
    opts.max_events = 2;
    const Trajectory traj = simulate(conservative(1.0), quiet, {0.0, 1.0, 1.0}, 10.0, opts);
    REQUIRE(traj.events.size() >= 1);
    CHECK(traj.events[0].t_alpha == 0.0);
    CHECK(traj.events[0].v_minus == doctest::Approx(1.0));
}

TEST_CASE("initial position beyond the limiter is rejected") {
    CHECK_THROWS_AS(simulate(conservative(1.0), quiet, {0.0, 1.5, 0.0}, 1.0, {}),
                    DomainError);
}

TEST_CASE("impacts below graze_tol are flagged and still reflected") {
    SimOptions opts;
    opts.max_events = 3;
    opts.graze_tol = 2.0;  // every impact on this J = 2 orbit counts as grazing
    const Trajectory traj =
        simulate(conservative(1.0), quiet, {0.0, 1.0, -1.0}, 30.0, opts);
    REQUIRE(traj.events.size() == 3);
    for (const auto& ev : traj.events) {
        CHECK(ev.grazing);
        CHECK(ev.v_minus == doctest::Approx(1.0).epsilon(1e-9));
    }
    // reflection applied: flights continue with the unperturbed period
    const double period = two_pi / omega0_of_impulse(2.0, conservative(1.0));
    CHECK(traj.events[2].t_alpha - traj.events[1].t_alpha ==
          doctest::Approx(period).epsilon(1e-9));
}

TEST_CASE("observables: resonance-frame phases and periods") {
    const OscillatorConfig cfg = conservative(1.0);
    const ResonancePoint rp = find_resonance({1.0, 1.0, 0.1, 0.005}, 1.5, 1, 1);

    SimOptions opts;
    opts.max_events = 12;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    SUBCASE("exact resonance: eta_hat constant, periods equal 2 pi p/(q nu)") {
        const Trajectory traj =
            simulate(cfg, quiet, {0.0, 1.0, -0.5 * j_star}, 60.0, opts);
        const auto obs = observables(traj, rp);
        REQUIRE(obs.size() >= 10);
        for (std::size_t i = 1; i < obs.size(); ++i) {
            CHECK(std::abs(obs[i].t_period - 4.0 * M_PI / 3.0) < 1e-8);
            CHECK(circular_distance(obs[i].eta_hat, obs[0].eta_hat) < 1e-6);
        }
    }

    SUBCASE("off resonance: eta_hat drifts by -(q/p) nu (T - T_res) per impact") {
        const double j_off = 3.0;
        const Trajectory traj =
            simulate(cfg, quiet, {0.0, 1.0, -0.5 * j_off}, 60.0, opts);
        const auto obs = observables(traj, rp);
        REQUIRE(obs.size() >= 5);
        const double t_res = 4.0 * M_PI / 3.0;
        for (std::size_t i = 1; i < obs.size(); ++i) {
            const double expected = -rp.ratio() * (obs[i].t_period - t_res);
            const double measured = wrap_pm_pi(obs[i].eta_hat - obs[i - 1].eta_hat);
            CHECK(std::abs(wrap_pm_pi(measured - expected)) < 1e-8);
        }
    }

    SUBCASE("too few events") {
        SimOptions one;
        one.max_events = 1;
        const Trajectory traj =
            simulate(cfg, quiet, {0.0, 1.0, -0.5 * j_star}, 5.0, one);
        CHECK_THROWS_AS(observables(traj, rp), InsufficientData);
    }
}

TEST_CASE("lock report on a conservative exact-resonance run") {
    // field and run share epsilon = 0 so beta(eps t) is frozen
    const OscillatorConfig cons{1.0, 1.0, 0.1, 0.0};
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
    const ResonancePoint rp = find_resonance(cons, 1.5, 1, 1);
    const AveragedField field = make_averaged_field(cons, forcing, rp);

    SimOptions opts;
    opts.max_events = 50;
    const Trajectory traj =
        simulate(cons, forcing, {0.0, 1.0, -0.5 * j_star}, 300.0, opts);
    const auto obs = observables(traj, rp);
    const LockReport report = lock_report(obs, field, {}, 0.8);
    CHECK(report.circ_std < 1e-5);
    CHECK(report.mean_impulse == doctest::Approx(j_star).epsilon(1e-8));
    CHECK_FALSE(report.matched_branch.has_value());
}

TEST_CASE("branch start state reproduces the branch phase at the first impact") {
    const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
    const ResonancePoint rp = find_resonance(cfg, 1.5, 1, 1);
    const AveragedField field = make_averaged_field(cfg, forcing, rp);
    const auto branches = equilibria(field, field.tau_grid(64));

    for (const auto& br : branches) {
        const SimState start = branch_start_state(field, br, 0.0, 0.0);
        CHECK(start.x == cfg.delta);
        CHECK(start.v == doctest::Approx(-0.5 * rp.j_pq));
        const double eta_hat = wrap_two_pi(-rp.ratio() * start.t);
        CHECK(circular_distance(eta_hat, br.eta_at(cfg.epsilon * start.t, field)) <
              1e-10);
    }

    // phase offset shifts the start phase by exactly that amount
    const SimState start =
        branch_start_state(field, branches[0], 0.25, 0.0);
    const double eta_hat = wrap_two_pi(-rp.ratio() * start.t);
    CHECK(circular_distance(
              eta_hat, wrap_two_pi(branches[0].eta_at(cfg.epsilon * start.t, field) +
                                   0.25)) < 1e-10);
}

TEST_CASE("phase lock on the stable branch (medium run)") {
    const OscillatorConfig cfg{1.0, 1.0, 0.1, 0.005};
    const ForcingSpec forcing = CloseFrequencies{1.0, 0.5, 1.5, 1.0};
    const ResonancePoint rp = find_resonance(cfg, 1.5, 1, 1);
    const AveragedField field = make_averaged_field(cfg, forcing, rp);
    const auto grid = field.tau_grid(128);
    auto branches = equilibria(field, grid);
    for (auto& br : branches)
        br.stability = classify(br, coefficients(br, field, grid));
    REQUIRE(branches[1].stability == Stability::StableThm2);

    SimOptions opts;
    opts.max_events = 600;
    const Trajectory traj = simulate(cfg, forcing, branch_start_state(field, branches[1]),
                                     5000.0, opts);
    const auto obs = observables(traj, rp);
    const LockReport report = lock_report(obs, field, branches, 0.8);
    CHECK(report.matched_branch.has_value());
    CHECK(*report.matched_branch == 1);
    CHECK(std::abs(report.mean_impulse - rp.j_pq) < 5.0 * rp.mu);
    // the impact phase stays within the resonance zone of the stable branch
    for (const auto& o : obs) {
        const double eta0 =
            branches[1].eta_at(cfg.epsilon * o.t_alpha, field);
        CHECK(circular_distance(o.eta_hat, eta0) < 1.0);
    }
}
