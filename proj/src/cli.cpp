// List / run commands and the export bundle

#include "dret/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dret/closed.hpp"
#include "dret/export.hpp"
#include "dret/heom.hpp"

namespace dret::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t resolve_threads(const RunArgs& args, std::optional<std::size_t> from_meta) {
    if (args.threads) {
        if (*args.threads == 0) throw UsageError("--threads must be at least 1");
        return *args.threads;
    }
    if (const char* env = std::getenv("DRET_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw UsageError(std::string("DRET_THREADS: not a positive integer: ") + env);
        return static_cast<std::size_t>(v);
    }
    return from_meta.value_or(1);
}

json stats_json(const ode::StepStats& s) {
    return {{"accepted_steps", s.accepted},
            {"rejected_steps", s.rejected},
            {"rhs_evaluations", s.rhs_evaluations},
            {"last_step", s.last_step}};
}

json run_closed(const RunConfig& c, const fs::path& dir, std::vector<std::string>& files, std::ostream& out) {
    const auto chain = c.chain();
    ClosedOptions opts;
    opts.tmax = c.tmax;
    opts.dt_out = c.dt_out;
    opts.tolerance = c.numerics.closed_tolerance;
    opts.wigner_frames = c.wigner.frames;
    opts.wigner_grid = PhaseGrid::symmetric(c.wigner.extent, c.wigner.points);
    FockTruncation trunc{c.numerics.fock_max, c.numerics.fock_escalation_cap};

    json info;
    TrajectoryResult traj;
    if (c.numerics.fock_auto_converge) {
        auto conv = converge_fock(chain, *c.mode, c.initial_site, trunc, opts);
        json hist = json::array();
        for (const auto& [n, change] : conv.history) hist.push_back({{"n_max", n}, {"max_population_change", change}});
        info["fock_convergence"] = {{"accepted_n_max", conv.accepted_n_max},
                                    {"max_population_change", conv.max_population_change},
                                    {"history", hist}};
        traj = std::move(conv.trajectory);
    } else {
        const auto h = build_polaron_hamiltonian(chain, *c.mode, trunc);
        traj = evolve_closed(h, initial_state(chain, *c.mode, trunc, c.initial_site), c.initial_site, opts);
    }
    info["n_max"] = traj.n_max;
    info["samples"] = traj.times.size();
    double norm_drift = 0.0, energy_drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        norm_drift = std::max(norm_drift, std::abs(traj.norm[i] - 1.0));
        energy_drift = std::max(energy_drift, std::abs(traj.energy[i] - traj.energy.front()));
    }
    info["max_norm_drift"] = norm_drift;
    info["max_energy_drift"] = energy_drift;

    auto written = io::write_closed_outputs(dir, traj);
    files.insert(files.end(), written.begin(), written.end());
    if (!traj.wigner_frames.empty()) {
        json frames = json::array();
        for (std::size_t f = 0; f < traj.wigner_frames.size(); ++f) {
            frames.push_back({{"file", io::wigner_file_name(f)},
                              {"t", traj.wigner_frames[f].t},
                              {"normalization", traj.wigner_frames[f].normalization}});
        }
        const auto& g = opts.wigner_grid;
        info["wigner"] = {{"grid", {{"q_min", g.q_min}, {"q_max", g.q_max}, {"q_points", g.q_points},
                                    {"p_min", g.p_min}, {"p_max", g.p_max}, {"p_points", g.p_points}}},
                          {"frames", frames}};
    }
    out << c.name << ": final delta " << io::format_number(traj.rms_displacement.back()) << " at t "
        << io::format_number(traj.times.back()) << "\n";
    return info;
}

json run_heom(const RunConfig& c, std::size_t threads, const fs::path& dir, std::vector<std::string>& files,
              std::ostream& out) {
    heom::HeomOptions opts;
    opts.tmax = c.tmax;
    opts.dt_out = c.dt_out;
    opts.cutoff = c.numerics.heom_cutoff;
    opts.rtol = c.numerics.heom_rtol;
    opts.atol = c.numerics.heom_atol;
    opts.fixed_step = c.numerics.heom_fixed_step;
    opts.threads = threads;
    opts.reference_site = c.initial_site;
    const auto chain = c.chain();
    const auto res = heom::heom_evolve(chain, *c.bath, heom::site_projector(chain.site_count(), c.initial_site), opts);

    double trace_drift = 0.0;
    for (double tr : res.trace) trace_drift = std::max(trace_drift, std::abs(tr - 1.0));
    json info{{"cutoff", res.cutoff},
              {"ado_count", res.ado_count},
              {"integrator", res.fixed_step ? "rk4" : "dopri54"},
              {"rtol", res.rtol},
              {"atol", res.atol},
              {"fixed_step", res.fixed_step ? json(*res.fixed_step) : json(nullptr)},
              {"stats", stats_json(res.stats)},
              {"samples", res.times.size()},
              {"max_trace_drift", trace_drift}};
    auto written = io::write_heom_outputs(dir, res);
    files.insert(files.end(), written.begin(), written.end());
    out << c.name << ": final delta " << io::format_number(res.rms_displacement.back()) << " at t "
        << io::format_number(res.times.back()) << " (" << res.ado_count << " ADOs)\n";
    return info;
}

}  // namespace

std::string list_presets() {
    std::ostringstream os;
    for (const auto& name : preset_names()) {
        const auto p = preset(name);
        os << name << '\t' << to_string(p.config.regime) << '\t' << p.citation << '\n';
    }
    return os.str();
}

RunOutcome run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    RunOutcome outcome;
    json& meta = outcome.meta;
    meta["tool"] = {{"name", "dret"}, {"version", kVersion}};
    meta["status"] = "error";
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    bool have_dir = false;

    auto fail = [&](int code, const char* kind, const std::string& msg) {
        outcome.exit_code = code;
        meta["error"] = {{"exit_code", code}, {"kind", kind}, {"message", msg}};
        err << "dret: " << kind << " error: " << msg << "\n";
    };

    try {
        const int sources = (args.scenario ? 1 : 0) + (args.config ? 1 : 0) + (args.replay ? 1 : 0);
        if (sources != 1) throw UsageError("exactly one of --scenario, --config or --replay is required");

        RunConfig cfg;
        std::optional<std::size_t> meta_threads;
        json source;
        if (args.scenario) {
            if (!has_preset(*args.scenario)) throw UsageError("unknown scenario '" + *args.scenario + "' (see 'dret list')");
            const auto p = preset(*args.scenario);
            cfg = p.config;
            source = {{"kind", "scenario"}, {"name", *args.scenario}, {"citation", p.citation},
                      {"checks", p.checks}, {"window_note", p.window_note}};
            if (!p.relaxation_sweep.empty()) source["relaxation_sweep"] = p.relaxation_sweep;
        } else if (args.config) {
            cfg = load_config(*args.config);
            source = {{"kind", "config"}, {"path", args.config->string()}, {"defaults_applied", cfg.defaults_applied}};
        } else {
            std::ifstream in(*args.replay, std::ios::binary);
            if (!in) throw ValidationError("cannot open " + args.replay->string());
            json old;
            try {
                old = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ValidationError(args.replay->string() + ": JSON parse error: " + e.what());
            }
            if (!old.contains("config")) throw ValidationError(args.replay->string() + ": no config recorded");
            cfg = config_from_json(old.at("config"));
            if (old.contains("threads") && old.at("threads").is_number_unsigned()) {
                meta_threads = old.at("threads").get<std::size_t>();
            }
            source = {{"kind", "replay"}, {"path", args.replay->string()}};
        }

        json overrides = json::object();
        if (args.tmax) { cfg.tmax = *args.tmax; overrides["tmax"] = *args.tmax; }
        if (args.dt_out) { cfg.dt_out = *args.dt_out; overrides["dt_out"] = *args.dt_out; }
        if (args.fock_max) {
            cfg.numerics.fock_max = *args.fock_max;
            overrides["fock_max"] = *args.fock_max;
        }
        if (args.heom_cutoff) {
            cfg.numerics.heom_cutoff = *args.heom_cutoff;
            overrides["heom_cutoff"] = *args.heom_cutoff;
        }
        if (args.wigner_frames) {
            cfg.wigner.frames = *args.wigner_frames;
            overrides["wigner_frames"] = *args.wigner_frames;
        }
        source["overrides"] = overrides;
        meta["source"] = source;

        outcome.out_dir = args.out ? *args.out : fs::path("dret-out") / (cfg.name.empty() ? "run" : cfg.name);
        fs::create_directories(outcome.out_dir);
        have_dir = true;

        const std::size_t threads = resolve_threads(args, meta_threads);
        meta["threads"] = threads;
        meta["config"] = to_json(cfg);
        validate_config(cfg);

        if (cfg.bath) warnings = cfg.bath->warnings();
        for (const auto& w : warnings) err << "dret: warning: " << w << "\n";

        json result;
        if (cfg.regime == Regime::Closed) {
            result = run_closed(cfg, outcome.out_dir, files, out);
        } else {
            result = run_heom(cfg, threads, outcome.out_dir, files, out);
        }
        meta["result"] = std::move(result);
        if (args.emit_plots) {
            auto gp = io::write_gnuplot_scripts(outcome.out_dir, cfg.chain_spec.energy_offsets.size(),
                                                cfg.regime == Regime::Heom, cfg.wigner.frames);
            files.insert(files.end(), gp.begin(), gp.end());
        }
        meta["status"] = "ok";
        outcome.exit_code = kOk;
    } catch (const UsageError& e) {
        fail(kUsage, "usage", e.what());
    } catch (const ValidationError& e) {
        fail(kValidation, "validation", e.what());
    } catch (const std::invalid_argument& e) {
        fail(kValidation, "validation", e.what());
    } catch (const std::out_of_range& e) {
        fail(kValidation, "validation", e.what());
    } catch (const NumericError& e) {
        fail(kNumeric, "numeric", e.what());
    } catch (const std::exception& e) {
        fail(kNumeric, "numeric", e.what());
    }

    meta["warnings"] = warnings;
    meta["files"] = files;
    if (have_dir) {
        try {
            io::write_json(outcome.out_dir / "meta.json", meta);
        } catch (const std::exception& e) {
            err << "dret: could not write meta.json: " << e.what() << "\n";
            if (outcome.exit_code == kOk) outcome.exit_code = kNumeric;
        }
    }
    return outcome;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic resonance energy transfer simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List built-in scenarios");

    RunArgs args;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario or config file and export CSV/JSON");
    auto* o_scn = run_cmd->add_option("--scenario", args.scenario, "Built-in preset name");
    auto* o_cfg = run_cmd->add_option("--config", args.config, "JSON run configuration");
    auto* o_rep = run_cmd->add_option("--replay", args.replay, "meta.json of an earlier run");
    o_scn->excludes(o_cfg)->excludes(o_rep);
    o_cfg->excludes(o_rep);
    run_cmd->add_option("--tmax", args.tmax, "End time in units of 1/J")->check(CLI::PositiveNumber);
    run_cmd->add_option("--dt-out", args.dt_out, "Output spacing in units of 1/J")->check(CLI::PositiveNumber);
    run_cmd->add_option("--fock-max", args.fock_max, "Highest phonon Fock level (closed runs)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--heom-cutoff", args.heom_cutoff, "Hierarchy depth (heom runs)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--wigner-frames", args.wigner_frames, "Number of Wigner frames to export");
    run_cmd->add_option("--out", args.out, "Output directory");
    run_cmd->add_option("--threads", args.threads, "Worker threads (DRET_THREADS if unset)");
    run_cmd->add_flag("--emit-plots", args.emit_plots, "Write gnuplot scripts next to the CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (list->parsed()) {
        out << list_presets();
        return kOk;
    }
    return run(args, out, err).exit_code;
}

}  // namespace dret::cli
