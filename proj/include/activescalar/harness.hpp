#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "activescalar/checkpoint.hpp"
#include "activescalar/config.hpp"
#include "activescalar/reports.hpp"

namespace asl {

enum ExitCode { kOk = 0, kVerdictFailure = 1, kUsageError = 2, kBlowUp = 3 };

namespace detail {

inline std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("cannot parse number '" + tok + "' in list '" + csv + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::string out_dir_or_default(std::string out) {
    if (out.empty()) {
        if (const char* env = std::getenv("ASL_OUT_DIR")) out = env;
    }
    if (out.empty()) out = ".";
    std::filesystem::create_directories(out);
    return out;
}

struct CommonOpts {
    std::string config_path;
    std::string preset_id;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    long checkpoint_every = 0;
    bool strict = false;
};

inline void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_source = true) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    if (needs_source) cmd->add_option("--preset", opts.preset_id, "experiment preset id");
    cmd->add_option("--out", opts.out, "output directory (fallback: $ASL_OUT_DIR)");
    cmd->add_option("--seed", opts.seed, "RNG seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--workers", opts.workers, "worker pool size for sweeps");
    cmd->add_option("--checkpoint-every", opts.checkpoint_every, "steps between checkpoints");
    cmd->add_flag("--strict", opts.strict, "warnings become errors");
}

inline int effective_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 2;
}

inline void apply_overrides(SolverConfig& cfg, const CommonOpts& opts) {
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.checkpoint_every > 0) cfg.checkpoint_every = opts.checkpoint_every;
    if (opts.strict) cfg.strict = true;
}

// Resolves --config / --preset into a preset-or-config pair.
inline ParsedConfig resolve_source(const CommonOpts& opts) {
    if (!opts.config_path.empty() && !opts.preset_id.empty())
        throw ConfigError("--config and --preset are mutually exclusive");
    if (!opts.config_path.empty()) return parse_config(opts.config_path);
    if (!opts.preset_id.empty()) {
        ParsedConfig parsed;
        parsed.preset = get_preset(opts.preset_id);
        return parsed;
    }
    throw ConfigError("one of --config or --preset is required");
}

inline int emit_run_outputs(const SolverConfig& cfg, const RunResult& result,
                            const std::string& out, const ExperimentPreset* preset) {
    write_text_file(out + "/run_series.csv", series_to_csv(result.series, cfg.hs_list));
    write_json_file(out + "/run_summary.json", run_summary_json(cfg, result));
    save_checkpoint(result.state, cfg, out + "/final.ckpt");

    bool verdict_failed = false;
    if (preset) {
        for (const std::string& d : preset->diagnostics) {
            if (d == "gevrey-radius") {
                std::vector<double> times, taus;
                for (const auto& rec : result.series)
                    if (rec.gevrey_tau) {
                        times.push_back(rec.t);
                        taus.push_back(*rec.gevrey_tau);
                    }
                Grid grid = make_grid(cfg.dim, cfg.n);
                SpectralField theta0 = build_field(cfg.initial_data, grid, cfg.seed);
                SpectralField forcing = build_field(cfg.forcing, grid, cfg.seed);
                auto v = check_radius_lower_bound(times, taus, &theta0, &forcing,
                                                  cfg.gevrey_fit_s > 0 ? cfg.gevrey_fit_s : 1.0);
                write_json_file(out + "/radius_verdict.json", to_json(v));
                if (!v.pass && !v.inconclusive) verdict_failed = true;
            } else if (d == "grad-growth") {
                auto v = grad_growth_check(result.series,
                                           cfg.forcing.kind != FieldSpec::Kind::Zero);
                write_json_file(out + "/grad_growth_verdict.json", to_json(v));
                if (!v.pass && !v.inconclusive) verdict_failed = true;
            } else if (d == "linf-bound") {
                auto v = linf_boundedness_check(result.series, cfg.gamma, cfg.dim,
                                                cfg.forcing.kind != FieldSpec::Kind::Zero);
                write_json_file(out + "/linf_verdict.json", to_json(v));
                if (!v.pass && !v.inconclusive) verdict_failed = true;
            }
        }
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return verdict_failed ? kVerdictFailure : kOk;
}

inline int cmd_run(const CommonOpts& opts, long save_at) {
    ParsedConfig parsed = resolve_source(opts);
    const ExperimentPreset* preset = nullptr;
    SolverConfig cfg;
    if (parsed.preset) {
        if (parsed.preset->kind != "run")
            throw ConfigError("preset '" + parsed.preset->id + "' is a " + parsed.preset->kind +
                              " preset; use the matching subcommand");
        preset = &*parsed.preset;
        cfg = preset->config;
    } else {
        cfg = *parsed.config;
    }
    apply_overrides(cfg, opts);
    std::string out = out_dir_or_default(opts.out);

    Runner runner(cfg);
    if (save_at > 0) {
        // Step to the requested point, checkpoint, then let run() finish.
        while (runner.state().step < save_at) runner.step();
        save_checkpoint(runner.state(), runner.config(), out + "/mid.ckpt");
    }
    RunResult result = Runner(cfg).run();
    return emit_run_outputs(cfg, result, out, preset);
}

inline int cmd_resume(const CommonOpts& opts, const std::string& checkpoint_path) {
    ParsedConfig parsed = resolve_source(opts);
    SolverConfig cfg = parsed.preset ? parsed.preset->config : *parsed.config;
    apply_overrides(cfg, opts);
    std::string out = out_dir_or_default(opts.out);

    CheckpointHeader header;
    StepState state = load_checkpoint(checkpoint_path, &header);
    if (header.dim != cfg.dim || header.n != cfg.n || header.law != cfg.law.kind)
        throw ConfigError("checkpoint (d=" + std::to_string(header.dim) + ", n=" +
                          std::to_string(header.n) + ", law=" + law_name(header.law) +
                          ") does not match the config");
    Runner runner(cfg, std::move(state));
    RunResult result = runner.run();
    return emit_run_outputs(cfg, result,  out,
                            parsed.preset ? &*parsed.preset : nullptr);
}

inline int cmd_sweep(const CommonOpts& opts) {
    ParsedConfig parsed = resolve_source(opts);
    SolverConfig cfg;
    SweepSpec sweep;
    if (parsed.preset) {
        if (parsed.preset->kind != "sweep")
            throw ConfigError("preset '" + parsed.preset->id + "' is not a sweep preset");
        cfg = parsed.preset->config;
        sweep = *parsed.preset->sweep;
    } else {
        if (!parsed.sweep)
            throw ConfigError("config has no 'sweep' section; nothing to sweep");
        cfg = *parsed.config;
        sweep = *parsed.sweep;
    }
    apply_overrides(cfg, opts);
    std::string out = out_dir_or_default(opts.out);

    ConvergenceReport report = convergence_study(cfg, sweep.param, sweep.values, sweep.s_list,
                                                 sweep.eval_times,
                                                 effective_workers(opts.workers));
    write_json_file(out + "/convergence_report.json", to_json(report));
    std::cout << "sweep " << sweep_param_name(sweep.param)
              << (report.monotone ? ": monotone decrease\n" : ": NOT monotone\n");
    return report.monotone ? kOk : kVerdictFailure;
}

inline int cmd_absorbing_ball(const CommonOpts& opts) {
    ParsedConfig parsed = resolve_source(opts);
    if (!parsed.preset || parsed.preset->kind != "absorbing-ball")
        throw ConfigError("absorbing-ball needs the absorbing-ball preset");
    SolverConfig cfg = parsed.preset->config;
    apply_overrides(cfg, opts);
    std::string out = out_dir_or_default(opts.out);
    auto verdict = absorbing_ball_check(cfg, parsed.preset->ball_scales,
                                        parsed.preset->required_entry_time,
                                        effective_workers(opts.workers));
    write_json_file(out + "/absorbing_ball.json", to_json(verdict));
    std::cout << "absorbing ball radius " << verdict.radius
              << (verdict.pass ? ": all trajectories absorbed\n" : ": NOT absorbed\n");
    return verdict.pass ? kOk : kVerdictFailure;
}

inline int cmd_audit(const CommonOpts& opts, std::string law_arg, std::string condition_arg,
                     int K, std::string nu_csv) {
    std::string out = out_dir_or_default(opts.out);
    std::vector<LawKind> laws;
    bool preset_mode = false;
    if (!opts.preset_id.empty()) {
        auto preset = get_preset(opts.preset_id);
        if (preset.kind != "audit")
            throw ConfigError("preset '" + opts.preset_id + "' is not an audit preset");
        laws = {LawKind::MG, LawKind::IPMB, LawKind::SQG};
        K = preset.audit_K;
        nu_csv.clear();
        preset_mode = true;
    } else if (!law_arg.empty()) {
        laws = {law_from_name(law_arg)};
    } else {
        throw ConfigError("audit needs --law or --preset symbol-audit-all");
    }
    std::vector<double> nu_values =
        nu_csv.empty() ? std::vector<double>{0.0, 1e-3, 1e-2, 0.1, 1.0}
                       : parse_double_list(nu_csv);
    std::vector<Condition> conditions;
    if (condition_arg.empty() || condition_arg == "all")
        conditions = {Condition::A1, Condition::A2, Condition::A2Star, Condition::A3,
                      Condition::A5};
    else
        conditions = {condition_from_name(condition_arg)};

    bool all_pass = true;
    for (LawKind law : laws)
        for (Condition cond : conditions) {
            std::vector<double> nus = nu_values;
            if (preset_mode && cond != Condition::A1 && cond != Condition::A5) {
                // Smoothing only holds for nu > 0, and the finite-shell
                // plateau rule needs the nu|k|^2 transition to sit inside
                // the audited range, so the preset sticks to nu >= 0.1.
                std::erase_if(nus, [](double nu) { return nu < 0.1; });
            }
            auto report = audit_condition(law, cond, K, nus);
            std::string name = law_name(law) + "_" +
                               (cond == Condition::A2Star ? "A2star" : condition_name(cond));
            write_json_file(out + "/audit_" + name + ".json", to_json(report));
            std::cout << law_name(law) << " " << condition_name(cond)
                      << ": sup=" << report.measured_sup
                      << (report.pass ? " pass" : " FAIL") << "\n";
            if (!report.pass) all_pass = false;
        }
    return all_pass ? kOk : kVerdictFailure;
}

inline int cmd_report(const std::string& in_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(in_dir)) throw ConfigError("'" + in_dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cout << "no JSON reports in " << in_dir << "\n";
        return kOk;
    }
    for (const auto& path : files) {
        std::ifstream is(path);
        nlohmann::json j;
        try {
            is >> j;
        } catch (...) {
            continue;
        }
        std::cout << path.filename().string() << ":\n";
        if (j.contains("condition")) {
            std::cout << "  condition " << j["condition"].get<std::string>() << " law "
                      << j["law"].get<std::string>() << "  sup=" << j["measured_sup"]
                      << "  " << (j["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
        } else if (j.contains("swept_parameter")) {
            std::cout << "  sweep over " << j["swept_parameter"].get<std::string>()
                      << "  monotone=" << (j["monotone"].get<bool>() ? "yes" : "no")
                      << "  min halving factor=" << j["min_halving_factor"] << "\n";
        } else if (j.contains("radius")) {
            std::cout << "  absorbing ball R=" << j["radius"] << "  "
                      << (j["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
        } else if (j.contains("final")) {
            const auto& f = j["final"];
            std::cout << "  run to t=" << f["t"] << "  l2=" << f["l2"]
                      << "  energy_residual=" << f["energy_residual"] << "\n";
        } else if (j.contains("pass")) {
            std::cout << "  verdict: " << (j["pass"].get<bool>() ? "pass" : "FAIL")
                      << (j.value("inconclusive", false) ? " (inconclusive)" : "") << "\n";
        }
    }
    return kOk;
}

}  // namespace detail

/// Entry point shared by the CLI binary and the tests. argv excludes the
/// program name.
inline int cli_run(const std::vector<std::string>& args) {
    CLI::App app{"active scalar pseudo-spectral lab"};
    app.require_subcommand(1);

    detail::CommonOpts run_opts, sweep_opts, audit_opts, ball_opts, resume_opts;
    long save_at = 0;
    std::string checkpoint_path, audit_law, audit_condition_arg, audit_nu_csv, report_dir;
    int audit_K = 32;

    auto* run_cmd = app.add_subcommand("run", "single trajectory with diagnostics");
    detail::add_common(run_cmd, run_opts);
    run_cmd->add_option("--save-at", save_at, "also write mid.ckpt at this step");

    auto* sweep_cmd = app.add_subcommand("sweep", "convergence study over nu or kappa");
    detail::add_common(sweep_cmd, sweep_opts);

    auto* ball_cmd = app.add_subcommand("absorbing-ball", "absorbing ball check");
    detail::add_common(ball_cmd, ball_opts);

    auto* audit_cmd = app.add_subcommand("audit", "structural condition audits");
    detail::add_common(audit_cmd, audit_opts);
    audit_cmd->add_option("--law", audit_law, "mg|ipmb|sqg");
    audit_cmd->add_option("--condition", audit_condition_arg, "A1|A2|A2*|A3|A5|all");
    audit_cmd->add_option("--K", audit_K, "shell cutoff");
    audit_cmd->add_option("--nu", audit_nu_csv, "comma-separated nu list");

    auto* report_cmd = app.add_subcommand("report", "summarize prior outputs");
    report_cmd->add_option("--in", report_dir, "directory of JSON reports")->required();

    auto* resume_cmd = app.add_subcommand("resume", "continue from a checkpoint");
    detail::add_common(resume_cmd, resume_opts);
    resume_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::cerr << (e.get_exit_code() == 0 ? "" : "usage error: ") << e.what() << "\n";
        return e.get_exit_code() == 0 ? kOk : kUsageError;
    }

    try {
        if (run_cmd->parsed()) return detail::cmd_run(run_opts, save_at);
        if (sweep_cmd->parsed()) return detail::cmd_sweep(sweep_opts);
        if (ball_cmd->parsed()) return detail::cmd_absorbing_ball(ball_opts);
        if (audit_cmd->parsed())
            return detail::cmd_audit(audit_opts, audit_law, audit_condition_arg, audit_K,
                                     audit_nu_csv);
        if (report_cmd->parsed()) return detail::cmd_report(report_dir);
        if (resume_cmd->parsed()) return detail::cmd_resume(resume_opts, checkpoint_path);
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kBlowUp;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace asl
