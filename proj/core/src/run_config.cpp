#include "impactres/run_config.hpp"

#include <fstream>
#include <set>
#include <string>

namespace impactres {

using nlohmann::json;

namespace {

void expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
}

void reject_unknown(const json& j, const std::string& ctx,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items())
        if (allowed.find(key) == allowed.end())
            throw ConfigError(ctx + ": unknown key \"" + key + "\"");
}

double get_number(const json& j, const std::string& ctx, const std::string& key,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& ctx, const std::string& key,
                         std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(ctx + "." + key + ": expected an integer");
    return j.at(key).get<std::int64_t>();
}

OscillatorConfig parse_oscillator(const json& j) {
    expect_object(j, "oscillator");
    reject_unknown(j, "oscillator", {"big_omega", "delta", "gamma", "epsilon"});
    OscillatorConfig cfg;
    cfg.big_omega = get_number(j, "oscillator", "big_omega", cfg.big_omega);
    cfg.delta = get_number(j, "oscillator", "delta", cfg.delta);
    cfg.gamma = get_number(j, "oscillator", "gamma", cfg.gamma);
    cfg.epsilon = get_number(j, "oscillator", "epsilon", cfg.epsilon);
    return cfg;
}

ForcingSpec parse_forcing(const json& j) {
    expect_object(j, "forcing");
    const std::string type = j.value("type", std::string("close_frequencies"));
    if (type == "close_frequencies") {
        reject_unknown(j, "forcing", {"type", "a1", "a2", "nu", "big_gamma"});
        CloseFrequencies cf;
        cf.a1 = get_number(j, "forcing", "a1", cf.a1);
        cf.a2 = get_number(j, "forcing", "a2", cf.a2);
        cf.nu = get_number(j, "forcing", "nu", cf.nu);
        cf.big_gamma = get_number(j, "forcing", "big_gamma", cf.big_gamma);
        return cf;
    }
    if (type == "distinct_frequencies") {
        reject_unknown(j, "forcing", {"type", "amp_a", "amp_b", "nu", "big_gamma", "theta"});
        DistinctFrequencies df;
        df.amp_a = get_number(j, "forcing", "amp_a", df.amp_a);
        df.amp_b = get_number(j, "forcing", "amp_b", df.amp_b);
        df.nu = get_number(j, "forcing", "nu", df.nu);
        df.big_gamma = get_number(j, "forcing", "big_gamma", df.big_gamma);
        df.theta = get_number(j, "forcing", "theta", df.theta);
        return df;
    }
    throw ConfigError("forcing.type: expected close_frequencies or distinct_frequencies");
}

ResonanceRequest parse_resonance(const json& j) {
    expect_object(j, "resonance");
    reject_unknown(j, "resonance", {"q", "p", "n_max"});
    ResonanceRequest rr;
    rr.q = static_cast<int>(get_integer(j, "resonance", "q", rr.q));
    rr.p = static_cast<int>(get_integer(j, "resonance", "p", rr.p));
    rr.n_max = static_cast<int>(get_integer(j, "resonance", "n_max", rr.n_max));
    if (rr.q < 1 || rr.p < 1) throw ConfigError("resonance: q and p must be >= 1");
    if (rr.n_max < 1) throw ConfigError("resonance.n_max must be >= 1");
    return rr;
}

InitialCondition parse_initial(const json& j) {
    expect_object(j, "simulation.initial");
    const std::string type = j.value("type", std::string("branch"));
    if (type == "branch") {
        reject_unknown(j, "simulation.initial",
                       {"type", "sign", "l", "phase_offset", "impulse_offset"});
        InitialBranch ib;
        if (j.contains("sign")) {
            const std::string sign = j.at("sign").get<std::string>();
            if (sign == "+")
                ib.sign = 1;
            else if (sign == "-")
                ib.sign = -1;
            else
                throw ConfigError("simulation.initial.sign: expected \"+\" or \"-\"");
        }
        ib.l = static_cast<int>(get_integer(j, "simulation.initial", "l", ib.l));
        ib.phase_offset =
            get_number(j, "simulation.initial", "phase_offset", ib.phase_offset);
        ib.impulse_offset =
            get_number(j, "simulation.initial", "impulse_offset", ib.impulse_offset);
        if (ib.l < 0) throw ConfigError("simulation.initial.l must be >= 0");
        return ib;
    }
    if (type == "state") {
        reject_unknown(j, "simulation.initial", {"type", "t", "x", "v"});
        InitialState is;
        is.t = get_number(j, "simulation.initial", "t", is.t);
        is.x = get_number(j, "simulation.initial", "x", is.x);
        is.v = get_number(j, "simulation.initial", "v", is.v);
        return is;
    }
    throw ConfigError("simulation.initial.type: expected branch or state");
}

SimulationConfig parse_simulation(const json& j) {
    expect_object(j, "simulation");
    reject_unknown(j, "simulation",
                   {"horizon", "max_events", "initial", "rtol", "atol", "graze_tol",
                    "warmup_fraction", "lock_threshold", "samples_stride"});
    SimulationConfig sim;
    sim.horizon = get_number(j, "simulation", "horizon", sim.horizon);
    sim.max_events = get_integer(j, "simulation", "max_events", sim.max_events);
    if (j.contains("initial")) sim.initial = parse_initial(j.at("initial"));
    sim.rtol = get_number(j, "simulation", "rtol", sim.rtol);
    sim.atol = get_number(j, "simulation", "atol", sim.atol);
    sim.graze_tol = get_number(j, "simulation", "graze_tol", sim.graze_tol);
    sim.warmup_fraction =
        get_number(j, "simulation", "warmup_fraction", sim.warmup_fraction);
    sim.lock_threshold = get_number(j, "simulation", "lock_threshold", sim.lock_threshold);
    sim.samples_stride = static_cast<int>(
        get_integer(j, "simulation", "samples_stride", sim.samples_stride));
    if (!(sim.horizon > 0.0)) throw ConfigError("simulation.horizon must be > 0");
    if (sim.max_events < 0) throw ConfigError("simulation.max_events must be >= 0");
    if (!(sim.rtol > 0.0) || !(sim.atol > 0.0))
        throw ConfigError("simulation tolerances must be > 0");
    if (!(sim.warmup_fraction >= 0.0 && sim.warmup_fraction < 1.0))
        throw ConfigError("simulation.warmup_fraction must lie in [0, 1)");
    if (!(sim.lock_threshold > 0.0))
        throw ConfigError("simulation.lock_threshold must be > 0");
    if (sim.samples_stride < 0) throw ConfigError("simulation.samples_stride must be >= 0");
    return sim;
}

ScanConfig parse_scan(const json& j) {
    expect_object(j, "scan");
    reject_unknown(j, "scan", {"axis", "from", "to", "count"});
    ScanConfig sc;
    if (!j.contains("axis")) throw ConfigError("scan.axis is required");
    sc.axis = j.at("axis").get<std::string>();
    if (sc.axis != "nu" && sc.axis != "gamma" && sc.axis != "epsilon")
        throw ConfigError("scan.axis: expected nu, gamma, or epsilon");
    sc.from = get_number(j, "scan", "from", sc.from);
    sc.to = get_number(j, "scan", "to", sc.to);
    sc.count = static_cast<int>(get_integer(j, "scan", "count", sc.count));
    if (sc.count < 1) throw ConfigError("scan.count must be >= 1");
    return sc;
}

OutputConfig parse_output(const json& j) {
    expect_object(j, "output");
    reject_unknown(j, "output", {"dir"});
    OutputConfig out;
    if (j.contains("dir")) out.dir = j.at("dir").get<std::string>();
    return out;
}

}  // namespace

RunConfig canonical_config() { return RunConfig{}; }

RunConfig run_config_from_json(const json& j) {
    RunConfig config;
    try {
        expect_object(j, "config");
        reject_unknown(j, "config",
                       {"oscillator", "forcing", "resonance", "simulation", "scan", "output"});
        if (j.contains("oscillator"))
            config.oscillator = parse_oscillator(j.at("oscillator"));
        if (j.contains("forcing")) config.forcing = parse_forcing(j.at("forcing"));
        if (j.contains("resonance")) config.resonance = parse_resonance(j.at("resonance"));
        if (j.contains("simulation"))
            config.simulation = parse_simulation(j.at("simulation"));
        if (j.contains("scan")) config.scan = parse_scan(j.at("scan"));
        if (j.contains("output")) config.output = parse_output(j.at("output"));
    } catch (const json::exception& err) {
        throw ConfigError("config: " + std::string(err.what()));
    }

    // Re-check the physical invariants of the embedded types.
    try {
        config.oscillator.validate();
        validate(config.forcing);
    } catch (const DomainError& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return config;
}

json run_config_to_json(const RunConfig& config) {
    json j;
    j["oscillator"] = {{"big_omega", config.oscillator.big_omega},
                       {"delta", config.oscillator.delta},
                       {"gamma", config.oscillator.gamma},
                       {"epsilon", config.oscillator.epsilon}};
    if (const auto* cf = std::get_if<CloseFrequencies>(&config.forcing)) {
        j["forcing"] = {{"type", "close_frequencies"},
                        {"a1", cf->a1},
                        {"a2", cf->a2},
                        {"nu", cf->nu},
                        {"big_gamma", cf->big_gamma}};
    } else {
        const auto& df = std::get<DistinctFrequencies>(config.forcing);
        j["forcing"] = {{"type", "distinct_frequencies"}, {"amp_a", df.amp_a},
                        {"amp_b", df.amp_b},               {"nu", df.nu},
                        {"big_gamma", df.big_gamma},       {"theta", df.theta}};
    }
    j["resonance"] = {{"q", config.resonance.q},
                      {"p", config.resonance.p},
                      {"n_max", config.resonance.n_max}};
    json init;
    if (const auto* ib = std::get_if<InitialBranch>(&config.simulation.initial)) {
        init = {{"type", "branch"},
                {"sign", ib->sign > 0 ? "+" : "-"},
                {"l", ib->l},
                {"phase_offset", ib->phase_offset},
                {"impulse_offset", ib->impulse_offset}};
    } else {
        const auto& is = std::get<InitialState>(config.simulation.initial);
        init = {{"type", "state"}, {"t", is.t}, {"x", is.x}, {"v", is.v}};
    }
    j["simulation"] = {{"horizon", config.simulation.horizon},
                       {"max_events", config.simulation.max_events},
                       {"initial", init},
                       {"rtol", config.simulation.rtol},
                       {"atol", config.simulation.atol},
                       {"graze_tol", config.simulation.graze_tol},
                       {"warmup_fraction", config.simulation.warmup_fraction},
                       {"lock_threshold", config.simulation.lock_threshold},
                       {"samples_stride", config.simulation.samples_stride}};
    if (config.scan) {
        j["scan"] = {{"axis", config.scan->axis},
                     {"from", config.scan->from},
                     {"to", config.scan->to},
                     {"count", config.scan->count}};
    }
    j["output"] = {{"dir", config.output.dir}};
    return j;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw ConfigError("config parse error: " + std::string(err.what()));
    }
    return run_config_from_json(j);
}

SimOptions sim_options(const SimulationConfig& sim) {
    SimOptions opts;
    opts.rtol = sim.rtol;
    opts.atol = sim.atol;
    opts.graze_tol = sim.graze_tol;
    opts.max_events = sim.max_events;
    opts.samples_stride = sim.samples_stride;
    return opts;
}

}  // namespace impactres
