#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "activescalar/audit.hpp"
#include "activescalar/config.hpp"
#include "activescalar/diagnostics.hpp"

namespace asl {

// Full-precision, locale-independent double formatting so identical runs
// emit byte-identical files.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string series_csv_header(const std::vector<double>& hs_list) {
    std::string h = "t,l2";
    for (double s : hs_list) {
        std::ostringstream ss;
        ss << "h" << s;
        h += "," + ss.str();
    }
    h += ",linf,grad_ld,energy_residual,gevrey_tau,dealias_energy_fraction";
    return h;
}

inline std::string series_to_csv(const std::vector<DiagnosticsRecord>& series,
                                 const std::vector<double>& hs_list) {
    std::string out = series_csv_header(hs_list) + "\n";
    for (const auto& rec : series) {
        out += format_double(rec.t) + "," + format_double(rec.l2);
        for (double h : rec.hs) out += "," + format_double(h);
        out += "," + format_double(rec.linf);
        out += "," + format_double(rec.grad_ld);
        out += "," + format_double(rec.energy_residual);
        out += "," + (rec.gevrey_tau ? format_double(*rec.gevrey_tau) : std::string());
        out += "," + format_double(rec.dealias_energy_fraction);
        out += "\n";
    }
    return out;
}

inline nlohmann::json record_to_json(const DiagnosticsRecord& rec) {
    nlohmann::json j{{"t", rec.t},
                     {"step", rec.step},
                     {"l2", rec.l2},
                     {"hs", rec.hs},
                     {"linf", rec.linf},
                     {"grad_ld", rec.grad_ld},
                     {"energy_residual", rec.energy_residual},
                     {"dealias_energy_fraction", rec.dealias_energy_fraction}};
    if (rec.gevrey_tau) j["gevrey_tau"] = *rec.gevrey_tau;
    return j;
}

inline nlohmann::json run_summary_json(const SolverConfig& cfg, const RunResult& result) {
    return {{"config", solver_config_to_json(cfg)},
            {"final", record_to_json(result.series.back())},
            {"records", result.series.size()},
            {"warnings", result.warnings}};
}

inline nlohmann::json to_json(const ConvergenceReport& r) {
    nlohmann::json table = nlohmann::json::array();
    for (std::size_t si = 0; si < r.s_list.size(); ++si) {
        nlohmann::json per_time = nlohmann::json::array();
        for (std::size_t ti = 0; ti < r.eval_times.size(); ++ti)
            per_time.push_back({{"t", r.eval_times[ti]},
                                {"differences", r.table[si][ti]},
                                {"fitted_rate", r.fitted_rate[si][ti]}});
        table.push_back({{"s", r.s_list[si]}, {"rows", per_time}});
    }
    return {{"swept_parameter", sweep_param_name(r.param)},
            {"values", r.values},
            {"reference", 0.0},
            {"eval_times", r.eval_times},
            {"table", table},
            {"monotone", r.monotone},
            {"min_halving_factor", r.min_halving_factor}};
}

inline nlohmann::json to_json(const AbsorbingBallVerdict& v) {
    nlohmann::json trajectories = nlohmann::json::array();
    for (const auto& t : v.trajectories)
        trajectories.push_back({{"scale", t.scale},
                                {"absorbed", t.absorbed},
                                {"entry_time", t.entry_time},
                                {"final_l2", t.final_l2}});
    return {{"radius", v.radius},
            {"pass", v.pass},
            {"decay_mode", v.decay_mode},
            {"trajectories", trajectories},
            {"note", v.note}};
}

inline nlohmann::json to_json(const RadiusVerdict& v) {
    return {{"pass", v.pass},
            {"inconclusive", v.inconclusive},
            {"relative_residual", v.relative_residual},
            {"decay_constant", v.decay_constant},
            {"gevrey_prefactor", v.gevrey_prefactor},
            {"tau_initial", v.tau_initial},
            {"tau_final", v.tau_final}};
}

inline nlohmann::json to_json(const GradGrowthVerdict& v) {
    return {{"pass", v.pass},
            {"inconclusive", v.inconclusive},
            {"relative_residual", v.relative_residual},
            {"coefficients", v.coefficients},
            {"max_excess", v.max_excess}};
}

inline nlohmann::json to_json(const LinfVerdict& v) {
    return {{"pass", v.pass},
            {"inconclusive", v.inconclusive},
            {"relative_residual", v.relative_residual},
            {"plateau", v.plateau},
            {"fitted_exponent", v.fitted_exponent},
            {"reference_exponent", v.reference_exponent},
            {"decay_mode", v.decay_mode}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + path + "'");
    os << content;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Minimal JSON-schema checker covering the subset our schema files use:
/// type, properties, required, items, enum, additionalProperties.
inline bool validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                                    std::string* error = nullptr, const std::string& path = "$") {
    auto fail = [&](const std::string& msg) {
        if (error) *error = path + ": " + msg;
        return false;
    };
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                  (t == "string" && doc.is_string()) || (t == "boolean" && doc.is_boolean()) ||
                  (t == "number" && doc.is_number()) ||
                  (t == "integer" && doc.is_number_integer()) || (t == "null" && doc.is_null());
        if (!ok) return fail("expected type " + t);
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"])
            if (v == doc) ok = true;
        if (!ok) return fail("value not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!doc.contains(key.get<std::string>()))
                    return fail("missing required key '" + key.get<std::string>() + "'");
        const auto props = schema.value("properties", nlohmann::json::object());
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (props.contains(it.key())) {
                if (!validate_against_schema(it.value(), props[it.key()], error,
                                             path + "." + it.key()))
                    return false;
            } else if (schema.value("additionalProperties", nlohmann::json(true)) ==
                       nlohmann::json(false)) {
                return fail("unexpected key '" + it.key() + "'");
            }
        }
    }
    if (doc.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            if (!validate_against_schema(doc[i], schema["items"], error,
                                         path + "[" + std::to_string(i) + "]"))
                return false;
    }
    return true;
}

}  // namespace asl
