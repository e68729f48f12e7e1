#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "activescalar/diagnostics.hpp"
#include "activescalar/evolution.hpp"

namespace asl {

struct SweepSpec {
    SweepParam param = SweepParam::Nu;
    std::vector<double> values;       // must include the reference 0
    std::vector<double> s_list{1.0};
    std::vector<double> eval_times;
};

/// Named experiment bound to a solver configuration; expansion is
/// deterministic.
struct ExperimentPreset {
    std::string id;
    std::string kind;  // run | sweep | absorbing-ball | audit
    SolverConfig config;
    std::optional<SweepSpec> sweep;
    std::vector<double> ball_scales{1.0, 5.0, 10.0};
    double required_entry_time = 0.0;
    std::vector<std::string> diagnostics;  // gevrey-radius | grad-growth | linf-bound
    int audit_K = 32;
    std::vector<double> audit_nu{0.0, 1e-3, 1e-2, 0.1, 1.0};
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + path + it.key() + "' in config");
}

inline FieldSpec parse_field_spec(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + " must be an object");
    std::string type = j.value("type", "zero");
    FieldSpec spec;
    if (type == "zero") {
        reject_unknown_keys(j, {"type"}, path + ".");
        spec.kind = FieldSpec::Kind::Zero;
    } else if (type == "modes") {
        reject_unknown_keys(j, {"type", "modes"}, path + ".");
        spec.kind = FieldSpec::Kind::Modes;
        if (!j.contains("modes") || !j["modes"].is_array())
            throw ConfigError(path + ".modes must be an array");
        for (const auto& m : j["modes"]) {
            reject_unknown_keys(m, {"k", "re", "im"}, path + ".modes[].");
            ModeSpec mode;
            auto kv = m.at("k").get<std::vector<int>>();
            if (kv.size() > 3) throw ConfigError(path + ".modes[].k has too many components");
            for (std::size_t i = 0; i < kv.size(); ++i) mode.k[i] = kv[i];
            mode.amplitude = {m.value("re", 0.0), m.value("im", 0.0)};
            spec.modes.push_back(mode);
        }
    } else if (type == "random") {
        reject_unknown_keys(j, {"type", "slope", "l2", "max_k", "seed_offset"}, path + ".");
        spec.kind = FieldSpec::Kind::RandomSpectrum;
        spec.spectrum_slope = j.value("slope", 2.0);
        spec.l2_target = j.value("l2", 1.0);
        spec.max_wavenumber = j.value("max_k", 0);
        spec.seed_offset = j.value("seed_offset", 0ULL);
    } else if (type == "gevrey") {
        reject_unknown_keys(j, {"type", "tau0", "s", "l2", "seed_offset"}, path + ".");
        spec.kind = FieldSpec::Kind::GevreySpectrum;
        spec.tau0 = j.value("tau0", 0.7);
        spec.gevrey_s = j.value("s", 1.0);
        spec.l2_target = j.value("l2", 1.0);
        spec.seed_offset = j.value("seed_offset", 0ULL);
    } else {
        throw ConfigError(path + ".type '" + type + "' unknown (zero|modes|random|gevrey)");
    }
    return spec;
}

inline nlohmann::json field_spec_to_json(const FieldSpec& spec) {
    switch (spec.kind) {
        case FieldSpec::Kind::Zero:
            return {{"type", "zero"}};
        case FieldSpec::Kind::Modes: {
            nlohmann::json modes = nlohmann::json::array();
            for (const auto& m : spec.modes)
                modes.push_back({{"k", std::vector<int>(m.k.begin(), m.k.end())},
                                 {"re", m.amplitude.real()},
                                 {"im", m.amplitude.imag()}});
            return {{"type", "modes"}, {"modes", modes}};
        }
        case FieldSpec::Kind::RandomSpectrum:
            return {{"type", "random"},
                    {"slope", spec.spectrum_slope},
                    {"l2", spec.l2_target},
                    {"max_k", spec.max_wavenumber},
                    {"seed_offset", spec.seed_offset}};
        case FieldSpec::Kind::GevreySpectrum:
            return {{"type", "gevrey"},
                    {"tau0", spec.tau0},
                    {"s", spec.gevrey_s},
                    {"l2", spec.l2_target},
                    {"seed_offset", spec.seed_offset}};
    }
    return {};
}

}  // namespace detail

inline SolverConfig solver_config_from_json(const nlohmann::json& j) {
    detail::reject_unknown_keys(
        j,
        {"law", "nu", "kappa", "gamma", "n", "d", "dt", "t_end", "integrator", "seed",
         "checkpoint_every", "initial_data", "forcing", "hs", "gevrey_fit_s",
         "auto_halve_dt", "strict", "sweep", "preset"},
        "");
    SolverConfig cfg;
    if (!j.contains("law")) throw ConfigError("missing required key 'law'");
    cfg.law.kind = law_from_name(j.at("law").get<std::string>());
    cfg.law.nu = j.value("nu", 0.0);
    cfg.kappa = j.value("kappa", 0.0);
    cfg.gamma = j.value("gamma", 2.0);
    cfg.dim = j.value("d", law_dimension(cfg.law.kind));
    cfg.n = j.value("n", 64);
    cfg.dt = j.value("dt", 1e-3);
    cfg.t_end = j.value("t_end", 1.0);
    cfg.integrator = integrator_from_name(j.value("integrator", std::string("rk4-if")));
    cfg.seed = j.value("seed", 0ULL);
    cfg.checkpoint_every = j.value("checkpoint_every", 100L);
    if (j.contains("initial_data"))
        cfg.initial_data = detail::parse_field_spec(j["initial_data"], "initial_data");
    else
        cfg.initial_data = FieldSpec{.kind = FieldSpec::Kind::RandomSpectrum,
                                     .spectrum_slope = 2.0,
                                     .l2_target = 1.0};
    if (j.contains("forcing")) cfg.forcing = detail::parse_field_spec(j["forcing"], "forcing");
    if (j.contains("hs")) cfg.hs_list = j["hs"].get<std::vector<double>>();
    cfg.gevrey_fit_s = j.value("gevrey_fit_s", 0.0);
    cfg.auto_halve_dt = j.value("auto_halve_dt", false);
    cfg.strict = j.value("strict", false);
    cfg.validate();
    return cfg;
}

inline nlohmann::json solver_config_to_json(const SolverConfig& cfg) {
    return {{"law", cfg.law.name()},
            {"nu", cfg.law.nu},
            {"kappa", cfg.kappa},
            {"gamma", cfg.gamma},
            {"n", cfg.n},
            {"d", cfg.dim},
            {"dt", cfg.dt},
            {"t_end", cfg.t_end},
            {"integrator", integrator_name(cfg.integrator)},
            {"seed", cfg.seed},
            {"checkpoint_every", cfg.checkpoint_every},
            {"initial_data", detail::field_spec_to_json(cfg.initial_data)},
            {"forcing", detail::field_spec_to_json(cfg.forcing)},
            {"hs", cfg.hs_list},
            {"gevrey_fit_s", cfg.gevrey_fit_s},
            {"auto_halve_dt", cfg.auto_halve_dt},
            {"strict", cfg.strict}};
}

inline std::optional<SweepSpec> sweep_spec_from_json(const nlohmann::json& j) {
    if (!j.contains("sweep")) return std::nullopt;
    const auto& s = j["sweep"];
    detail::reject_unknown_keys(s, {"param", "values", "s", "eval_times"}, "sweep.");
    SweepSpec spec;
    std::string p = s.value("param", "nu");
    if (p == "nu")
        spec.param = SweepParam::Nu;
    else if (p == "kappa")
        spec.param = SweepParam::Kappa;
    else
        throw ConfigError("sweep.param must be nu or kappa, got '" + p + "'");
    spec.values = s.at("values").get<std::vector<double>>();
    if (s.contains("s")) spec.s_list = s["s"].get<std::vector<double>>();
    spec.eval_times = s.at("eval_times").get<std::vector<double>>();
    return spec;
}

inline std::vector<std::string> preset_ids() {
    return {"mg-diffusive-nu-sweep", "mg-inviscid-gevrey",      "ipmb-nu-sweep",
            "sqg-critical-kappa-sweep", "absorbing-ball",       "symbol-audit-all"};
}

inline ExperimentPreset get_preset(const std::string& id) {
    ExperimentPreset p;
    p.id = id;

    FieldSpec smooth_random{.kind = FieldSpec::Kind::RandomSpectrum,
                            .spectrum_slope = 3.0,
                            .l2_target = 1.0,
                            .max_wavenumber = 4};

    if (id == "mg-diffusive-nu-sweep") {
        p.kind = "sweep";
        p.config.law = {LawKind::MG, 0.0};
        p.config.dim = 3;
        p.config.n = 32;
        p.config.kappa = 1.0;
        p.config.gamma = 2.0;
        p.config.dt = 2e-3;
        p.config.t_end = 2.0;
        p.config.checkpoint_every = 50;
        p.config.initial_data = smooth_random;
        p.config.forcing = FieldSpec{.kind = FieldSpec::Kind::Modes,
                                     .modes = {{{0, 1, 1}, {0.25, 0.0}}}};
        p.sweep = SweepSpec{SweepParam::Nu, {1.0, 0.1, 0.01, 0.0}, {1.0}, {1.0, 2.0}};
    } else if (id == "mg-inviscid-gevrey") {
        p.kind = "run";
        p.config.law = {LawKind::MG, 0.5};
        p.config.dim = 3;
        p.config.n = 32;
        p.config.kappa = 0.0;
        p.config.gamma = 2.0;
        p.config.dt = 1e-3;
        p.config.t_end = 1.0;
        p.config.checkpoint_every = 50;
        p.config.initial_data = FieldSpec{.kind = FieldSpec::Kind::GevreySpectrum,
                                          .l2_target = 1.0,
                                          .tau0 = 0.7,
                                          .gevrey_s = 1.0};
        p.config.gevrey_fit_s = 1.0;
        p.diagnostics = {"gevrey-radius", "grad-growth"};
    } else if (id == "ipmb-nu-sweep") {
        p.kind = "sweep";
        p.config.law = {LawKind::IPMB, 0.0};
        p.config.dim = 2;
        p.config.n = 128;
        p.config.kappa = 0.0;
        p.config.gamma = 2.0;
        p.config.dt = 1e-3;
        p.config.t_end = 0.5;
        p.config.checkpoint_every = 100;
        p.config.initial_data = smooth_random;
        p.sweep = SweepSpec{SweepParam::Nu, {0.1, 0.05, 0.025, 0.0125, 0.0}, {1.0}, {0.5}};
    } else if (id == "sqg-critical-kappa-sweep") {
        p.kind = "sweep";
        p.config.law = {LawKind::SQG, 0.1};
        p.config.dim = 2;
        p.config.n = 128;
        p.config.kappa = 0.0;
        p.config.gamma = 1.0;
        p.config.dt = 1e-3;
        p.config.t_end = 0.5;
        p.config.checkpoint_every = 100;
        p.config.initial_data = smooth_random;
        p.sweep = SweepSpec{SweepParam::Kappa, {0.1, 0.05, 0.025, 0.0}, {1.0}, {0.5}};
    } else if (id == "absorbing-ball") {
        p.kind = "absorbing-ball";
        p.config.law = {LawKind::MG, 0.1};
        p.config.dim = 3;
        p.config.n = 32;
        p.config.kappa = 1.0;
        p.config.gamma = 2.0;
        p.config.dt = 5e-3;
        p.config.t_end = 40.0;
        p.config.checkpoint_every = 100;
        p.config.integrator = Integrator::AB2IF;
        p.config.initial_data = smooth_random;
        p.config.forcing = FieldSpec{.kind = FieldSpec::Kind::Modes,
                                     .modes = {{{0, 0, 1}, {0.25, 0.0}}}};
        p.ball_scales = {1.0, 5.0, 10.0};
        p.required_entry_time = 20.0;
    } else if (id == "symbol-audit-all") {
        p.kind = "audit";
        p.audit_K = 32;
    } else {
        throw ConfigError("unknown preset '" + id + "'");
    }
    return p;
}

struct ParsedConfig {
    std::optional<SolverConfig> config;
    std::optional<SweepSpec> sweep;
    std::optional<ExperimentPreset> preset;
};

inline ParsedConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file '" + path + "' not found");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    ParsedConfig parsed;
    if (j.contains("preset")) {
        if (j.size() != 1)
            throw ConfigError("a preset config may not carry other keys");
        parsed.preset = get_preset(j["preset"].get<std::string>());
        return parsed;
    }
    parsed.config = solver_config_from_json(j);
    parsed.sweep = sweep_spec_from_json(j);
    return parsed;
}

}  // namespace asl
