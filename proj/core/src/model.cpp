#include "impactres/model.hpp"

#include <cmath>

#include "impactres/log.hpp"

namespace impactres {

double wrap_two_pi(double angle) {
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod can land exactly on 2*pi after the add
    return r;
}

double wrap_pm_pi(double angle) {
    double r = wrap_two_pi(angle);
    if (r > two_pi / 2.0) r -= two_pi;
    return r;
}

void OscillatorConfig::validate() const {
    if (!(big_omega > 0.0)) throw DomainError("OscillatorConfig: big_omega must be > 0");
    if (!(gamma > 0.0)) throw DomainError("OscillatorConfig: gamma must be > 0");
    if (!(epsilon >= 0.0)) throw DomainError("OscillatorConfig: epsilon must be >= 0");
    if (!std::isfinite(delta)) throw DomainError("OscillatorConfig: delta must be finite");
    if (epsilon > 0.1)
        log::warn("epsilon = " + std::to_string(epsilon) +
                  " is outside the small-perturbation regime (> 0.1)");
}

void validate(const ForcingSpec& forcing) {
    if (const auto* cf = std::get_if<CloseFrequencies>(&forcing)) {
        if (!(cf->a1 > 0.0) || !(cf->a2 > 0.0))
            throw DomainError("CloseFrequencies: amplitudes must be > 0");
        if (cf->a1 == cf->a2)
            throw DomainError("CloseFrequencies: a1 = a2 makes the envelope touch zero");
        if (!(cf->nu > 0.0)) throw DomainError("CloseFrequencies: nu must be > 0");
        if (!(cf->big_gamma > 0.0))
            throw DomainError("CloseFrequencies: big_gamma must be > 0");
    } else {
        const auto& df = std::get<DistinctFrequencies>(forcing);
        if (!(df.nu > 0.0)) throw DomainError("DistinctFrequencies: nu must be > 0");
        if (!(df.big_gamma > 0.0))
            throw DomainError("DistinctFrequencies: big_gamma must be > 0");
        if (!std::isfinite(df.amp_a) || !std::isfinite(df.amp_b) || !std::isfinite(df.theta))
            throw DomainError("DistinctFrequencies: amplitudes and theta must be finite");
    }
}

double forcing_nu(const ForcingSpec& forcing) {
    return std::visit([](const auto& f) { return f.nu; }, forcing);
}

double forcing_big_gamma(const ForcingSpec& forcing) {
    return std::visit([](const auto& f) { return f.big_gamma; }, forcing);
}

Envelope envelope(const ForcingSpec& forcing, double tau) {
    const auto* cf = std::get_if<CloseFrequencies>(&forcing);
    if (cf == nullptr)
        throw VariantError("envelope: requires the close-frequencies variant");
    const double phase = cf->big_gamma * tau;
    const double e2 = cf->a1 * cf->a1 + 2.0 * cf->a1 * cf->a2 * std::cos(phase) +
                      cf->a2 * cf->a2;
    const double e = std::sqrt(std::max(e2, 0.0));
    // E cos(beta) = a1 + a2 cos(Gamma tau), E sin(beta) = a2 sin(Gamma tau)
    const double beta =
        wrap_two_pi(std::atan2(cf->a2 * std::sin(phase), cf->a1 + cf->a2 * std::cos(phase)));
    return {e, beta};
}

double force(const ForcingSpec& forcing, double t, double tau) {
    if (const auto* cf = std::get_if<CloseFrequencies>(&forcing)) {
        return cf->a1 * std::sin(cf->nu * t) +
               cf->a2 * std::sin(cf->nu * t + cf->big_gamma * tau);
    }
    const auto& df = std::get<DistinctFrequencies>(forcing);
    return df.amp_a * std::sin(df.nu * t + df.theta) +
           df.amp_b * std::sin(df.big_gamma * tau);
}

}  // namespace impactres
