#pragma once

#include <string>
#include <vector>

#include "impactres/model.hpp"

namespace impactres {

/// One cross-check of the verification battery.
struct CheckResult {
    std::string name;
    double measured = 0.0;  ///< worst observed error
    double tolerance = 0.0;
    bool skipped = false;   ///< precondition unavailable for this config
    std::string note;

    bool passed() const { return skipped || measured <= tolerance; }
};

/// Battery of independent cross-checks: Fourier vs closed forms, the csc^2
/// and boundary identities, f0 vs its quadrature, finite-difference
/// derivative checks, and the conservative simulator laws.
/// `tighten` divides every tolerance (values > 1 are the injected-fault mode).
std::vector<CheckResult> run_verify_battery(const OscillatorConfig& config,
                                            const ForcingSpec& forcing,
                                            double tighten = 1.0);

}  // namespace impactres
