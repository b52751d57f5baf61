#pragma once

#include <stdexcept>
#include <string>

namespace impactres {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A forcing variant other than the one the operation expects.
struct VariantError : Error {
    using Error::Error;
};

/// Delta = 0: the frequency-impulse map is constant and not invertible.
struct DegenerateError : Error {
    using Error::Error;
};

/// Two-sided value of kappa_psi requested at a jump point psi = 2*l*pi.
struct JumpPointError : Error {
    using Error::Error;
};

/// State energy below the impact threshold (purely linear oscillation).
struct NonImpactingError : Error {
    using Error::Error;
};

/// (x, v) pair inconsistent with the claimed impulse J.
struct InconsistentStateError : Error {
    using Error::Error;
};

/// No impulse solves omega0(J) = (q/p) nu inside the admissible band.
struct NoResonance : Error {
    using Error::Error;
};

/// Delta = 0 resonance: omega0 is constant, omega0. = 0, stability analysis inapplicable.
struct DegenerateResonance : Error {
    using Error::Error;
};

/// Existence condition |A_n(tau)| < 1 fails somewhere on the tau grid.
struct NoUniformBranch : Error {
    using Error::Error;
};

/// Quadrature or other numerical procedure failed to converge.
struct NumericalError : Error {
    using Error::Error;
};

/// Not enough events for the requested analysis.
struct InsufficientData : Error {
    using Error::Error;
};

/// Adaptive integrator step-size underflow or failed event refinement.
struct IntegrationError : Error {
    using Error::Error;
};

/// Malformed or schema-violating run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace impactres
