#include "impactres/green.hpp"

#include <cmath>
#include <string>

namespace impactres {

namespace {
constexpr double kJumpGuard = 1e-12;
}

double reduce_phase(double psi) {
    double r = wrap_two_pi(psi);
    if (two_pi - r < kJumpGuard) r = 0.0;
    return r;
}

double omega0_of_impulse(double j, const OscillatorConfig& config) {
    const double om = config.big_omega;
    const double de = config.delta;
    if (j < 0.0) throw DomainError("omega0_of_impulse: J must be >= 0");
    if (de == 0.0) return 2.0 * om;
    if (de < 0.0 && j == 0.0)
        throw DomainError("omega0_of_impulse: frequency unbounded at J = 0 for delta < 0");
    const double u = j / (2.0 * om * de);
    if (de > 0.0) return M_PI * om / (M_PI - std::atan(u));
    return -M_PI * om / std::atan(u);
}

double impulse_of_frequency(double omega0, const OscillatorConfig& config) {
    const double om = config.big_omega;
    const double de = config.delta;
    if (de == 0.0)
        throw DegenerateError(
            "impulse_of_frequency: delta = 0, J is an arbitrary constant at omega0 = 2*Omega");
    if (de > 0.0) {
        if (!(omega0 > om && omega0 < 2.0 * om))
            throw DomainError("impulse_of_frequency: omega0 outside (Omega, 2*Omega)");
    } else {
        if (!(omega0 > 2.0 * om))
            throw DomainError("impulse_of_frequency: omega0 outside (2*Omega, inf)");
    }
    const double half_period_angle = M_PI * om / omega0;  // Omega*T0/2
    return -2.0 * om * de * std::tan(half_period_angle);
}

double omega0_prime(double j, const OscillatorConfig& config) {
    const double om = config.big_omega;
    const double de = config.delta;
    if (de == 0.0)
        throw DegenerateError("omega0_prime: omega0 is constant at delta = 0");
    if (j < 0.0) throw DomainError("omega0_prime: J must be >= 0");
    if (de < 0.0 && j == 0.0) throw DomainError("omega0_prime: J must be > 0 for delta < 0");
    const double u = j / (2.0 * om * de);
    const double ang = (de > 0.0) ? (M_PI - std::atan(u)) : std::atan(u);
    return M_PI * om / (ang * ang * (1.0 + u * u) * 2.0 * om * de);
}

GreensKernel::GreensKernel(const OscillatorConfig& config, double j)
    : config_(config), j_(j) {
    omega0_ = omega0_of_impulse(j, config);
    cap_ = config.big_omega / omega0_;
    period_ = two_pi / omega0_;
    sin_pi_cap_ = std::sin(M_PI * cap_);
    if (!(sin_pi_cap_ > 1e-14))
        throw DomainError("GreensKernel: sin(pi*Omega0) vanishes (grazing limit J -> 0)");
}

double GreensKernel::kappa(double psi) const {
    const double p = reduce_phase(psi);
    return 0.5 / config_.big_omega * std::cos(cap_ * (p - M_PI)) / sin_pi_cap_;
}

double GreensKernel::kappa_psi(double psi, JumpSide side) const {
    const double p = reduce_phase(psi);
    if (p < kJumpGuard) {
        switch (side) {
            case JumpSide::Above: return 0.5 / omega0_;
            case JumpSide::Below: return -0.5 / omega0_;
            case JumpSide::TwoSided:
                throw JumpPointError("kappa_psi: two-sided value requested at psi = 2*l*pi");
        }
    }
    return -0.5 / omega0_ * std::sin(cap_ * (p - M_PI)) / sin_pi_cap_;
}

double GreensKernel::kappa_j(double psi) const {
    if (config_.delta == 0.0) return 0.0;
    const double p = reduce_phase(psi);
    const double s = p - M_PI;
    const double sn = std::sin(cap_ * s);
    const double cs = std::cos(cap_ * s);
    const double cot = std::cos(M_PI * cap_) / sin_pi_cap_;
    // d(kappa)/d(Omega0) at fixed psi
    const double dk_dcap =
        0.5 / config_.big_omega * (-s * sn - M_PI * cs * cot) / sin_pi_cap_;
    const double dcap_dj = -config_.big_omega * omega0_prime(j_, config_) / (omega0_ * omega0_);
    return dk_dcap * dcap_dj;
}

double GreensKernel::kappa_psi_j(double psi, JumpSide side) const {
    if (config_.delta == 0.0) return 0.0;
    double p = reduce_phase(psi);
    if (p < kJumpGuard) {
        if (side == JumpSide::TwoSided)
            throw JumpPointError("kappa_psi_j: two-sided value requested at psi = 2*l*pi");
        // one-sided limits of +-1/(2 omega0): d/dJ = -+ omega0'/(2 omega0^2)
        const double d = -0.5 * omega0_prime(j_, config_) / (omega0_ * omega0_);
        return side == JumpSide::Above ? d : -d;
    }
    const double s = p - M_PI;
    const double sn = std::sin(cap_ * s);
    const double cs = std::cos(cap_ * s);
    const double cot = std::cos(M_PI * cap_) / sin_pi_cap_;
    // kappa_psi = -(Omega0/(2 Omega)) sin(Omega0 s)/sin(pi Omega0)
    const double dkp_dcap = -0.5 / config_.big_omega *
                            (sn + cap_ * s * cs - cap_ * sn * M_PI * cot) / sin_pi_cap_;
    const double dcap_dj = -config_.big_omega * omega0_prime(j_, config_) / (omega0_ * omega0_);
    return dkp_dcap * dcap_dj;
}

double GreensKernel::mean_kappa_psi_sq() const {
    // Parseval on the kappa_psi Fourier series:
    //   sum_k k^2/(k^2 - a^2)^2 = pi^2 csc^2(pi a)/4 - pi cot(pi a)/(4a),
    // so the period mean of kappa_psi^2 carries a cot correction on top of
    // the csc^2 term (the correction vanishes at delta = 0 where a = 1/2).
    const double csc2 = 1.0 / (sin_pi_cap_ * sin_pi_cap_);
    const double cot = std::cos(M_PI * cap_) / sin_pi_cap_;
    return (csc2 - cot / (M_PI * cap_)) / (8.0 * omega0_ * omega0_);
}

double kappa(double psi, double j, const OscillatorConfig& config) {
    return GreensKernel(config, j).kappa(psi);
}

double kappa_psi(double psi, double j, const OscillatorConfig& config, JumpSide side) {
    return GreensKernel(config, j).kappa_psi(psi, side);
}

double kappa_j(double psi, double j, const OscillatorConfig& config) {
    return GreensKernel(config, j).kappa_j(psi);
}

double mean_kappa_psi_sq(double j, const OscillatorConfig& config) {
    return GreensKernel(config, j).mean_kappa_psi_sq();
}

double action_of_state(double x, double v, const OscillatorConfig& config) {
    if (x > config.delta + 1e-9)
        throw DomainError("action_of_state: x beyond the limiter");
    const double om2 = config.big_omega * config.big_omega;
    const double e2 = v * v + om2 * (x * x - config.delta * config.delta);
    if (!(e2 > 0.0))
        throw NonImpactingError(
            "action_of_state: energy below the impact threshold (linear regime)");
    return 2.0 * std::sqrt(e2);
}

double phase_of_state(double x, double v, double j, const OscillatorConfig& config) {
    if (!(j > 0.0)) throw DomainError("phase_of_state: J must be > 0");
    const GreensKernel k(config, j);
    const double s = std::sin(M_PI * k.omega0_cap());
    const double psi = wrap_two_pi(
        M_PI + std::atan2(2.0 * v * s / j, -2.0 * config.big_omega * x * s / j) /
                   k.omega0_cap());
    const double p = reduce_phase(psi);
    // Boundary states sit on the jump: post-impact (v < 0) on the 0+ side,
    // pre-impact (v > 0) on the 2*pi- side.
    const JumpSide side = v > 0.0 ? JumpSide::Below : JumpSide::Above;
    const double x_rec = -j * k.kappa(p);
    const double v_rec = -j * k.omega0() * k.kappa_psi(p, side);
    const double scale = std::max(1.0, std::max(std::abs(x), std::abs(v)));
    if (std::abs(x_rec - x) > 1e-8 * scale || std::abs(v_rec - v) > 1e-8 * scale)
        throw InconsistentStateError("phase_of_state: (x, v) not on the J-orbit");
    return p;
}

double kappa_fourier_partial(double psi, double j, const OscillatorConfig& config,
                             int terms) {
    const GreensKernel k(config, j);
    const double cap2 = k.omega0_cap() * k.omega0_cap();
    double sum = 1.0 / (two_pi * cap2);
    for (int kk = 1; kk <= terms; ++kk)
        sum += std::cos(kk * psi) / (M_PI * (cap2 - static_cast<double>(kk) * kk));
    return sum / k.omega0();
}

double kappa_psi_fejer(double psi, double j, const OscillatorConfig& config, int terms) {
    const GreensKernel k(config, j);
    const double cap2 = k.omega0_cap() * k.omega0_cap();
    double sum = 0.0;
    for (int kk = 1; kk <= terms; ++kk) {
        const double coeff = -static_cast<double>(kk) /
                             (M_PI * k.omega0() * (cap2 - static_cast<double>(kk) * kk));
        const double fejer_weight = 1.0 - static_cast<double>(kk) / (terms + 1.0);
        sum += fejer_weight * coeff * std::sin(kk * psi);
    }
    return sum;
}

}  // namespace impactres
