// impactres command-line tool: analytic resonance tables, equilibrium
// branches, the verification battery, event-driven simulation, and
// parameter scans, all driven by a JSON run configuration.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "impactres/checks.hpp"
#include "impactres/log.hpp"
#include "impactres/run_config.hpp"

namespace fs = std::filesystem;
using namespace impactres;

namespace {

std::string fmt9(double value) {
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    int seed = 0;  // reserved
    int samples_stride = -1;
    double tighten = 1.0;
};

RunConfig load_or_canonical(const CliArgs& args) {
    if (args.config_path.empty()) return canonical_config();
    return load_run_config(args.config_path);
}

fs::path resolve_out_dir(const CliArgs& args, const RunConfig& config) {
    fs::path dir = args.out_dir.empty() ? fs::path(config.output.dir)
                                        : fs::path(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path.string());
    log::info("writing " + path.string());
    return out;
}

std::string sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

// ---------------------------------------------------------------------------
// resonances: table of candidate q=1 resonances n = 1..n_max
// ---------------------------------------------------------------------------

int cmd_resonances(const CliArgs& args) {
    const RunConfig config = load_or_canonical(args);
    const fs::path dir = resolve_out_dir(args, config);
    std::string csv = "n,j_pq,omega0,omega0_prime,a_n_max,exists\n";

    for (int n = 1; n <= config.resonance.n_max; ++n) {
        std::string j_pq = "nan", omega0 = "nan", omega0_prime = "nan",
                    a_n_max = "nan", exists;
        if (config.oscillator.delta == 0.0) {
            exists = "degenerate";  // omega0 constant, omega0' = 0
        } else {
            try {
                const ResonancePoint rp =
                    find_resonance(config.oscillator, forcing_nu(config.forcing), 1, n);
                const AveragedField field =
                    make_averaged_field(config.oscillator, config.forcing, rp);
                double max_abs = 0.0;
                for (double tau : field.tau_grid(256))
                    max_abs = std::max(max_abs, std::abs(a_n(tau, field)));
                j_pq = fmt9(rp.j_pq);
                omega0 = fmt9(rp.ratio());
                omega0_prime = fmt9(rp.omega0_prime);
                a_n_max = fmt9(max_abs);
                exists = max_abs < 1.0 ? "true" : "false";
            } catch (const NoResonance&) {
                exists = "no_resonance";
            }
        }
        csv += std::to_string(n) + "," + j_pq + "," + omega0 + "," + omega0_prime +
               "," + a_n_max + "," + exists + "\n";
    }

    open_out(dir / "resonances.csv") << csv;
    std::fputs(csv.c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------------------
// equilibria: per-branch, per-tau table with stability labels
// ---------------------------------------------------------------------------

int cmd_equilibria(const CliArgs& args) {
    const RunConfig config = load_or_canonical(args);
    const fs::path dir = resolve_out_dir(args, config);

    const ResonancePoint rp = find_resonance(
        config.oscillator, forcing_nu(config.forcing), config.resonance.q,
        config.resonance.p);
    const AveragedField field =
        make_averaged_field(config.oscillator, config.forcing, rp);
    const std::vector<double> grid = field.tau_grid(256);
    std::vector<EquilibriumBranch> branches = equilibria(field, grid);

    std::string csv = "branch_id,sign,l,tau,eta0,a_n,a_coeff,stability\n";
    for (std::size_t b = 0; b < branches.size(); ++b) {
        auto& br = branches[b];
        const Coefficients co = coefficients(br, field, grid);
        br.stability = classify(br, co);
        std::printf("branch %zu: sign=%c l=%d stability=%s\n", b,
                    br.sign_branch > 0 ? '+' : '-', br.l, to_string(br.stability));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv += std::to_string(b) + ",";
            csv += br.sign_branch > 0 ? "+" : "-";
            csv += "," + std::to_string(br.l) + "," + fmt9(grid[i]) + "," +
                   fmt9(br.eta0[i]) + "," + fmt9(br.a_n[i]) + "," + fmt9(co.a[i]) +
                   "," + to_string(br.stability) + "\n";
        }
    }
    open_out(dir / "equilibria.csv") << csv;
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the cross-check battery
// ---------------------------------------------------------------------------

int cmd_verify(const CliArgs& args) {
    const RunConfig config = load_or_canonical(args);
    const auto results =
        run_verify_battery(config.oscillator, config.forcing, args.tighten);
    bool all_ok = true;
    for (const auto& r : results) {
        if (r.skipped) {
            std::printf("SKIP %-34s (%s)\n", r.name.c_str(), r.note.c_str());
            continue;
        }
        const bool ok = r.passed();
        all_ok = all_ok && ok;
        std::printf("%s %-34s measured=%.3e tol=%.3e\n", ok ? "PASS" : "FAIL",
                    r.name.c_str(), r.measured, r.tolerance);
    }
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate: events CSV + lock report JSON line (+ optional samples CSV)
// ---------------------------------------------------------------------------

struct SimRun {
    std::vector<Observation> obs;
    LockReport lock;
    Trajectory traj;
    std::optional<std::size_t> stable_count;
    std::optional<std::size_t> unstable_count;
    double j_pq = std::numeric_limits<double>::quiet_NaN();
    bool branches_exist = false;
};

SimRun run_simulation(const RunConfig& config, int samples_stride_override) {
    const ResonancePoint rp = find_resonance(
        config.oscillator, forcing_nu(config.forcing), config.resonance.q,
        config.resonance.p);
    const AveragedField field =
        make_averaged_field(config.oscillator, config.forcing, rp);

    std::vector<EquilibriumBranch> branches;
    std::size_t stable = 0, unstable = 0;
    bool have_branches = false;
    try {
        const auto grid = field.tau_grid(256);
        branches = equilibria(field, grid);
        for (auto& br : branches) {
            br.stability = classify(br, coefficients(br, field, grid));
            if (br.stability == Stability::StableThm2)
                ++stable;
            else
                ++unstable;
        }
        have_branches = true;
    } catch (const NoUniformBranch&) {
        if (std::holds_alternative<InitialBranch>(config.simulation.initial))
            throw;  // a branch start was requested but none exists
    }

    SimState initial;
    if (const auto* ib = std::get_if<InitialBranch>(&config.simulation.initial)) {
        const EquilibriumBranch* chosen = nullptr;
        for (const auto& br : branches)
            if (br.sign_branch == ib->sign && br.l == ib->l) chosen = &br;
        if (chosen == nullptr)
            throw NoUniformBranch(
                "simulate: no equilibrium branch with the requested sign/l");
        initial =
            branch_start_state(field, *chosen, ib->phase_offset, ib->impulse_offset);
    } else {
        const auto& is = std::get<InitialState>(config.simulation.initial);
        initial = {is.t, is.x, is.v};
    }

    SimOptions opts = sim_options(config.simulation);
    if (samples_stride_override >= 0) opts.samples_stride = samples_stride_override;

    SimRun run;
    run.traj = simulate(config.oscillator, config.forcing, initial,
                        config.simulation.horizon, opts);
    run.obs = observables(run.traj, rp);
    run.lock = lock_report(run.obs, field, branches,
                           1.0 - config.simulation.warmup_fraction,
                           config.simulation.lock_threshold);
    run.j_pq = rp.j_pq;
    run.branches_exist = have_branches;
    if (have_branches) {
        run.stable_count = stable;
        run.unstable_count = unstable;
    }
    return run;
}

nlohmann::json lock_to_json(const LockReport& lock) {
    nlohmann::json j;
    j["locked"] = lock.locked;
    j["mean_impulse"] = lock.mean_impulse;
    j["circ_std"] = lock.circ_std;
    if (lock.matched_branch)
        j["matched_branch"] = *lock.matched_branch;
    else
        j["matched_branch"] = nullptr;
    return j;
}

int cmd_simulate(const CliArgs& args) {
    const RunConfig config = load_or_canonical(args);
    const fs::path dir = resolve_out_dir(args, config);
    const SimRun run = run_simulation(config, args.samples_stride);

    std::string csv = "t_alpha,v_minus,j_alpha,eta_hat\n";
    for (const auto& o : run.obs) {
        csv += fmt9(o.t_alpha) + "," + fmt9(0.5 * o.j_alpha) + "," + fmt9(o.j_alpha) +
               "," + fmt9(o.eta_hat) + "\n";
    }
    open_out(dir / "events.csv") << csv;

    if (!run.traj.samples.empty()) {
        std::string samples_csv = "t,x,v\n";
        for (const auto& s : run.traj.samples)
            samples_csv += fmt9(s.t) + "," + fmt9(s.x) + "," + fmt9(s.v) + "\n";
        open_out(dir / "samples.csv") << samples_csv;
    }

    const std::string line = lock_to_json(run.lock).dump();
    open_out(dir / "lock.jsonl") << line << "\n";
    std::printf("%s\n", line.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// scan: analyze + simulate over a parameter grid, deterministic row order
// ---------------------------------------------------------------------------

RunConfig with_axis_value(RunConfig config, const std::string& axis, double value) {
    if (axis == "nu") {
        std::visit([&](auto& f) { f.nu = value; }, config.forcing);
    } else if (axis == "gamma") {
        config.oscillator.gamma = value;
    } else {
        config.oscillator.epsilon = value;
    }
    return config;
}

std::string scan_row(const RunConfig& base, const ScanConfig& scan, int idx) {
    const double value =
        scan.count == 1 ? scan.from
                        : scan.from + (scan.to - scan.from) * idx / (scan.count - 1.0);
    std::string row = std::to_string(idx) + "," + scan.axis + "," + fmt9(value) + ",";
    try {
        const RunConfig config = with_axis_value(base, scan.axis, value);
        validate(config.forcing);
        config.oscillator.validate();
        const SimRun run = run_simulation(config, -1);
        row += fmt9(run.j_pq) + ",";
        row += run.branches_exist ? "true" : "false";
        row += ",";
        row += run.stable_count ? std::to_string(*run.stable_count) : "0";
        row += ",";
        row += run.unstable_count ? std::to_string(*run.unstable_count) : "0";
        row += ",";
        row += run.lock.locked ? "true" : "false";
        row += "," + fmt9(run.lock.mean_impulse) + "," + fmt9(run.lock.circ_std) + ",";
        row += run.lock.matched_branch ? std::to_string(*run.lock.matched_branch) : "";
        row += ",";
    } catch (const Error& err) {
        row += "nan,false,0,0,false,nan,nan,," + sanitize(err.what());
        return row;
    }
    return row;
}

int cmd_scan(const CliArgs& args) {
    const RunConfig config = load_or_canonical(args);
    if (!config.scan) throw ConfigError("scan: config has no scan block");
    const ScanConfig scan = *config.scan;
    const fs::path dir = resolve_out_dir(args, config);

    std::vector<std::string> rows(scan.count);
    const int jobs = std::max(1, args.jobs);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < scan.count; i = next.fetch_add(1))
            rows[i] = scan_row(config, scan, i);
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < std::min(jobs, scan.count); ++w)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();

    std::string csv =
        "idx,param,value,j_pq,exists,stable_count,unstable_count,locked,"
        "mean_impulse,circ_std,matched_branch,error\n";
    for (const auto& row : rows) csv += row + "\n";
    open_out(dir / "scan.csv") << csv;
    std::fputs(csv.c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonant almost-periodic vibrations of a damped impact oscillator "
                 "under biharmonic excitation"};
    app.require_subcommand(1);

    CliArgs args;
    const auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", args.config_path, "JSON run config");
        if (config_required) opt->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--jobs", args.jobs, "concurrent scan workers");
        sub->add_option("--seed", args.seed, "reserved");
        sub->add_option("--samples-stride", args.samples_stride,
                        "record a state sample every N accepted steps");
    };

    auto* resonances = app.add_subcommand("resonances", "table of q=1 resonance points");
    add_common(resonances, true);
    auto* equilibria_cmd =
        app.add_subcommand("equilibria", "equilibrium branches and stability");
    add_common(equilibria_cmd, true);
    auto* verify = app.add_subcommand("verify", "run the cross-check battery");
    add_common(verify, false);
    verify->add_option("--tighten", args.tighten,
                       "divide every tolerance by this factor");
    auto* simulate_cmd = app.add_subcommand("simulate", "event-driven simulation run");
    add_common(simulate_cmd, true);
    auto* scan = app.add_subcommand("scan", "parameter scan (analyze + simulate)");
    add_common(scan, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (resonances->parsed()) return cmd_resonances(args);
        if (equilibria_cmd->parsed()) return cmd_equilibria(args);
        if (verify->parsed()) return cmd_verify(args);
        if (simulate_cmd->parsed()) return cmd_simulate(args);
        if (scan->parsed()) return cmd_scan(args);
    } catch (const ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const NoUniformBranch& err) {
        std::fprintf(stderr, "no branch: %s\n", err.what());
        return 3;
    } catch (const NoResonance& err) {
        std::fprintf(stderr, "no resonance: %s\n", err.what());
        return 3;
    } catch (const DegenerateResonance& err) {
        std::fprintf(stderr, "degenerate resonance: %s\n", err.what());
        return 3;
    } catch (const IntegrationError& err) {
        std::fprintf(stderr, "integration error: %s\n", err.what());
        return 4;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
