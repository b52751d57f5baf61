#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "impactres/model.hpp"
#include "impactres/simulator.hpp"

namespace impactres {

/// Explicit initial state for a simulation run.
struct InitialState {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
};

/// Start at an impact on an equilibrium branch (see branch_start_state).
struct InitialBranch {
    int sign = -1;  ///< arccos branch, +1 or -1
    int l = 0;
    double phase_offset = 0.0;
    double impulse_offset = 0.0;
};

using InitialCondition = std::variant<InitialState, InitialBranch>;

/// Resonance request: a single (q, p) pair, plus the table depth n_max used
/// by the resonances subcommand (rows n = 1..n_max with q = 1).
struct ResonanceRequest {
    int q = 1;
    int p = 1;
    int n_max = 3;
};

struct SimulationConfig {
    double horizon = 10000.0;
    std::int64_t max_events = 2000;
    InitialCondition initial = InitialBranch{};
    double rtol = 1e-10;
    double atol = 1e-12;
    double graze_tol = 1e-8;
    double warmup_fraction = 0.2;  ///< events discarded before lock analysis
    double lock_threshold = 0.15;  ///< circular-std bound for `locked` (rad)
    int samples_stride = 0;
};

struct ScanConfig {
    std::string axis;  ///< "nu" | "gamma" | "epsilon"
    double from = 0.0;
    double to = 0.0;
    int count = 1;
};

struct OutputConfig {
    std::string dir = ".";
};

/// Full run configuration. The JSON schema is strict: unknown keys are
/// rejected at every level, and all physical invariants of the embedded
/// types are re-checked on load.
struct RunConfig {
    OscillatorConfig oscillator;
    ForcingSpec forcing = CloseFrequencies{};
    ResonanceRequest resonance;
    SimulationConfig simulation;
    std::optional<ScanConfig> scan;
    OutputConfig output;
};

/// Canonical built-in parameters (used when no config file is given).
RunConfig canonical_config();

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

/// Load and validate a JSON config file. Throws ConfigError.
RunConfig load_run_config(const std::string& path);

SimOptions sim_options(const SimulationConfig& sim);

}  // namespace impactres
