#include "impactres/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "impactres/green.hpp"
#include "impactres/log.hpp"

namespace impactres {

namespace {

struct Vec2 {
    double x, v;
};

/// Right-hand side of x'' = -Omega^2 x + eps (f(t, eps t) - gamma x').
struct Rhs {
    const OscillatorConfig* config;
    const ForcingSpec* forcing;

    Vec2 operator()(double t, const Vec2& y) const {
        const double eps = config->epsilon;
        double acc = -config->big_omega * config->big_omega * y.x;
        if (eps != 0.0)
            acc += eps * (force(*forcing, t, eps * t) - config->gamma * y.v);
        return {y.v, acc};
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    Vec2 y;      ///< solution at t + h (5th order)
    Vec2 k_end;  ///< derivative at t + h (FSAL stage)
    double err;  ///< scaled error estimate
};

StepResult dp5_step(const Rhs& rhs, double t, const Vec2& y, const Vec2& k1, double h,
                    double rtol, double atol) {
    auto axpy = [](const Vec2& y0, double hh, std::initializer_list<std::pair<double, const Vec2*>> terms) {
        Vec2 r = y0;
        for (const auto& [coeff, k] : terms) {
            r.x += hh * coeff * k->x;
            r.v += hh * coeff * k->v;
        }
        return r;
    };

    const Vec2 k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const Vec2 k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec2 k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec2 k5 =
        rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec2 k6 = rhs(
        t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec2 y1 =
        axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec2 k7 = rhs(t + h, y1);

    const double err_x = h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x +
                              e6 * k6.x + e7 * k7.x);
    const double err_v = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v +
                              e6 * k6.v + e7 * k7.v);
    const double sc_x = atol + rtol * std::max(std::abs(y.x), std::abs(y1.x));
    const double sc_v = atol + rtol * std::max(std::abs(y.v), std::abs(y1.v));
    const double ex = err_x / sc_x;
    const double ev = err_v / sc_v;
    return {y1, k7, std::sqrt(0.5 * (ex * ex + ev * ev))};
}

/// Cubic Hermite interpolant of x(t) on the accepted step, for bracketing only.
double hermite_x(const Vec2& y0, const Vec2& k0, const Vec2& y1, const Vec2& k1,
                 double h, double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0.x + (t3 - 2 * t2 + theta) * h * k0.x +
           (-2 * t3 + 3 * t2) * y1.x + (t3 - t2) * h * k1.x;
}

/// Step cap T0/50 from the impact period of the current state (falls back to
/// the linear half period when the energy is below the impact threshold).
double step_cap(const OscillatorConfig& config, const Vec2& y) {
    const double om2 = config.big_omega * config.big_omega;
    const double e2 = y.v * y.v + om2 * (y.x * y.x - config.delta * config.delta);
    double w0;
    if (e2 > 1e-12) {
        w0 = omega0_of_impulse(2.0 * std::sqrt(e2), config);
    } else {
        w0 = 2.0 * config.big_omega;
    }
    return two_pi / w0 / 50.0;
}

/// Brent root finding on [a, b] with f(a) < 0 <= f(b) (or the reverse).
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol) {
    double c = a, fc = fa;
    double d = b - a, e = b - a;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                            0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

}  // namespace

Trajectory simulate(const OscillatorConfig& config, const ForcingSpec& forcing,
                    const SimState& initial, double horizon, const SimOptions& opts) {
    config.validate();
    validate(forcing);
    if (!(horizon > 0.0)) throw DomainError("simulate: horizon must be > 0");
    if (initial.x > config.delta + 1e-9)
        throw DomainError("simulate: initial position beyond the limiter");

    const Rhs rhs{&config, &forcing};
    Trajectory traj;
    traj.config = config;
    traj.forcing = forcing;
    traj.initial = initial;

    double t = initial.t;
    const double t_end = initial.t + horizon;
    Vec2 y{std::min(initial.x, config.delta), initial.v};

    // A boundary state moving into the wall impacts immediately.
    if (y.x == config.delta && y.v > 0.0) {
        traj.events.push_back({t, y.v, 2.0 * y.v, y.v < opts.graze_tol});
        y.v = -y.v;
    }

    Vec2 k1 = rhs(t, y);
    double h = step_cap(config, y) / 5.0;
    long accepted = 0;
    if (opts.samples_stride > 0) traj.samples.push_back({t, y.x, y.v});

    const auto record_sample = [&](double ts, const Vec2& ys) {
        ++accepted;
        if (opts.samples_stride > 0 && accepted % opts.samples_stride == 0)
            traj.samples.push_back({ts, ys.x, ys.v});
    };

    while (t < t_end) {
        if (opts.max_events > 0 &&
            static_cast<std::int64_t>(traj.events.size()) >= opts.max_events)
            break;

        const double hmin =
            4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (t_end - t < hmin) break;  // horizon reached up to rounding
        const double hmax = step_cap(config, y);
        h = std::min({h, hmax, t_end - t});
        if (h < hmin)
            throw IntegrationError("simulate: step size underflow at t = " +
                                   std::to_string(t));

        const StepResult step = dp5_step(rhs, t, y, k1, h, opts.rtol, opts.atol);
        if (step.err > 1.0) {
            const double factor =
                std::max(0.2, 0.9 * std::pow(step.err, -0.2));
            h *= factor;
            continue;
        }

        // Scan for an upcrossing of x = delta inside the accepted step.
        bool event_found = false;
        double bracket_lo = 0.0, bracket_hi = 0.0;
        {
            constexpr int scan_points = 8;
            double g_prev = y.x - config.delta;
            for (int i = 1; i <= scan_points; ++i) {
                const double theta = static_cast<double>(i) / scan_points;
                const double g =
                    (i == scan_points)
                        ? step.y.x - config.delta
                        : hermite_x(y, k1, step.y, step.k_end, h, theta) - config.delta;
                if (g_prev < 0.0 && g >= 0.0) {
                    event_found = true;
                    bracket_lo = (static_cast<double>(i) - 1.0) / scan_points * h;
                    bracket_hi = theta * h;
                    break;
                }
                g_prev = g;
            }
        }

        if (event_found) {
            // Refine against single substeps of the integrator itself: the
            // interpolant only brackets, the substep carries full accuracy.
            const auto state_at = [&](double dt) -> Vec2 {
                if (dt <= 0.0) return y;
                return dp5_step(rhs, t, y, k1, dt, opts.rtol, opts.atol).y;
            };
            const auto gap = [&](double dt) { return state_at(dt).x - config.delta; };

            double lo = bracket_lo, hi = bracket_hi;
            double glo = gap(lo), ghi = gap(hi);
            // Re-bracket on the substep values (the Hermite bracket may be
            // off by a subinterval near grazing).
            if (!(glo < 0.0 && ghi >= 0.0)) {
                constexpr int scan_points = 16;
                bool ok = false;
                double g_prev = y.x - config.delta;
                for (int i = 1; i <= scan_points; ++i) {
                    const double dt = h * i / scan_points;
                    const double g = gap(dt);
                    if (g_prev < 0.0 && g >= 0.0) {
                        lo = h * (i - 1.0) / scan_points;
                        hi = dt;
                        glo = g_prev;
                        ghi = g;
                        ok = true;
                        break;
                    }
                    g_prev = g;
                }
                event_found = ok;
            }

            if (event_found) {
                const double dt_star =
                    glo == 0.0 ? lo : brent_root(gap, lo, hi, glo, ghi, 1e-13);
                const double t_star = t + dt_star;
                const Vec2 y_star = state_at(dt_star);
                if (std::abs(y_star.x - config.delta) > 1e-11)
                    throw IntegrationError("simulate: impact localization failed at t = " +
                                           std::to_string(t_star));
                const double v_minus = y_star.v;
                const bool grazing = v_minus < opts.graze_tol;
                if (grazing) log::debug("grazing impact at t = " + std::to_string(t_star));
                traj.events.push_back({t_star, v_minus, 2.0 * v_minus, grazing});

                t = t_star;
                y = {config.delta, -std::abs(v_minus)};
                k1 = rhs(t, y);
                record_sample(t, y);
                continue;
            }
        }

        // Plain accepted step.
        t += h;
        y = step.y;
        if (y.x > config.delta + 1e-9)
            throw IntegrationError("simulate: x exceeded the limiter without an event");
        k1 = step.k_end;  // FSAL
        record_sample(t, y);
        const double factor =
            step.err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(step.err, -0.2)));
        h *= factor;
    }

    traj.final_state = {t, y.x, y.v};
    return traj;
}

std::vector<Observation> observables(const Trajectory& traj, const ResonancePoint& rp) {
    if (traj.events.size() < 2)
        throw InsufficientData("observables: need at least 2 impact events");
    const double rate = rp.ratio();
    std::vector<Observation> obs;
    obs.reserve(traj.events.size());
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
        const auto& ev = traj.events[i];
        Observation o;
        o.t_alpha = ev.t_alpha;
        o.j_alpha = ev.j_alpha;
        o.t_period = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : ev.t_alpha - traj.events[i - 1].t_alpha;
        o.eta_hat = wrap_two_pi(-rate * ev.t_alpha);
        obs.push_back(o);
    }
    return obs;
}

double circular_mean(const std::vector<double>& angles) {
    double s = 0.0, c = 0.0;
    for (double a : angles) {
        s += std::sin(a);
        c += std::cos(a);
    }
    return wrap_two_pi(std::atan2(s, c));
}

double circular_std(const std::vector<double>& angles) {
    if (angles.empty()) return 0.0;
    double s = 0.0, c = 0.0;
    for (double a : angles) {
        s += std::sin(a);
        c += std::cos(a);
    }
    const double r = std::hypot(s, c) / angles.size();
    if (r <= 0.0) return std::numeric_limits<double>::infinity();
    if (r >= 1.0) return 0.0;
    return std::sqrt(-2.0 * std::log(r));
}

double circular_distance(double a, double b) { return std::abs(wrap_pm_pi(a - b)); }

LockReport lock_report(const std::vector<Observation>& obs, const AveragedField& field,
                       const std::vector<EquilibriumBranch>& branches, double window,
                       double threshold) {
    if (!(window > 0.0 && window <= 1.0))
        throw DomainError("lock_report: window must lie in (0, 1]");
    if (obs.empty()) throw InsufficientData("lock_report: no observations");
    const std::size_t count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window * obs.size())));
    const std::size_t begin = obs.size() - count;

    const double eps = field.config.epsilon;
    std::vector<double> theta;
    theta.reserve(count);
    double j_sum = 0.0;
    for (std::size_t i = begin; i < obs.size(); ++i) {
        const double tau = eps * obs[i].t_alpha;
        const Envelope env = field.envelope_at(tau);
        theta.push_back(wrap_two_pi(field.n * obs[i].eta_hat - env.beta_val));
        j_sum += obs[i].j_alpha;
    }

    LockReport report;
    report.mean_impulse = j_sum / count;
    report.phase_mean = circular_mean(theta);
    report.circ_std = circular_std(theta);
    report.locked = report.circ_std < threshold &&
                    std::abs(report.mean_impulse - field.rp.j_pq) < 5.0 * field.rp.mu;

    if (!branches.empty()) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t b = 0; b < branches.size(); ++b) {
            std::vector<double> phase;
            phase.reserve(count);
            for (std::size_t i = begin; i < obs.size(); ++i) {
                const double tau = eps * obs[i].t_alpha;
                const Envelope env = field.envelope_at(tau);
                phase.push_back(wrap_two_pi(
                    field.n * branches[b].eta_at(tau, field) - env.beta_val));
            }
            const double dist =
                circular_distance(report.phase_mean, circular_mean(phase));
            if (dist < best) {
                best = dist;
                best_idx = b;
            }
        }
        report.matched_branch = best_idx;
    }
    return report;
}

SimState branch_start_state(const AveragedField& field, const EquilibriumBranch& branch,
                            double phase_offset, double impulse_offset) {
    const double rate = field.rp.ratio();
    const double eps = field.config.epsilon;
    // Impact time with eta_hat = eta0(eps t) + offset: fixed point of
    // t = (2*pi - eta_target(eps t))/rate (mod the impact period).
    double t = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        const double target = wrap_two_pi(branch.eta_at(eps * t, field) + phase_offset);
        const double t_next = (two_pi - target) / rate;
        if (std::abs(t_next - t) < 1e-14) {
            t = t_next;
            break;
        }
        t = t_next;
    }
    const double j = field.rp.j_pq + impulse_offset;
    return {t, field.config.delta, -0.5 * j};
}

}  // namespace impactres
