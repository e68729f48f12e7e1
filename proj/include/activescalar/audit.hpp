#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "activescalar/constitutive.hpp"
#include "activescalar/fitting.hpp"

namespace asl {

enum class Condition { A1, A2, A2Star, A3, A5 };

inline std::string condition_name(Condition c) {
    switch (c) {
        case Condition::A1: return "A1";
        case Condition::A2: return "A2";
        case Condition::A2Star: return "A2*";
        case Condition::A3: return "A3";
        case Condition::A5: return "A5";
    }
    return "?";
}

inline Condition condition_from_name(const std::string& name) {
    if (name == "A1" || name == "a1") return Condition::A1;
    if (name == "A2" || name == "a2") return Condition::A2;
    if (name == "A2*" || name == "a2*" || name == "A2star" || name == "a2star")
        return Condition::A2Star;
    if (name == "A3" || name == "a3") return Condition::A3;
    if (name == "A5" || name == "a5") return Condition::A5;
    throw ConfigError("unknown condition '" + name + "' (expected A1|A2|A2*|A3|A5)");
}

struct ShellEntry {
    int radius = 0;   // shell r holds modes with r-1 < |k| <= r
    double sup = 0.0;
};

/// Finite-shell evidence for one structural condition of a multiplier
/// family. Not a proof: pass/fail uses the thresholds recorded below.
struct ConditionAuditReport {
    Condition condition = Condition::A1;
    LawKind law = LawKind::SQG;
    std::vector<double> nu_values;
    int K = 0;
    double measured_sup = 0.0;
    bool pass = false;
    std::vector<ShellEntry> shells;
    long singular_modes = 0;          // MG nu=0 ray k2=k3=0, excluded from sups
    double fitted_rate = 0.0;         // A5 only: log-log slope of |m^nu-m^0| in nu at k_ref
    double fit_r_squared = 0.0;       // A5 only
    std::array<int, 3> reference_k{0, 0, 0};
    std::string threshold_rule;
};

namespace detail {

template <typename Visit>
void for_each_mode(int dim, int K, Visit&& visit) {
    const std::int64_t K2 = static_cast<std::int64_t>(K) * K;
    std::array<int, 3> k{0, 0, 0};
    const int lo = -K, hi = K;
    for (int a = lo; a <= hi; ++a)
        for (int b = lo; b <= hi; ++b) {
            if (dim == 2) {
                k = {a, b, 0};
                std::int64_t kk = static_cast<std::int64_t>(a) * a + static_cast<std::int64_t>(b) * b;
                if (kk > 0 && kk <= K2) visit(k, kk);
            } else {
                for (int c = lo; c <= hi; ++c) {
                    k = {a, b, c};
                    std::int64_t kk = static_cast<std::int64_t>(a) * a +
                                      static_cast<std::int64_t>(b) * b +
                                      static_cast<std::int64_t>(c) * c;
                    if (kk > 0 && kk <= K2) visit(k, kk);
                }
            }
        }
}

inline int shell_of(std::int64_t kk) {
    return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(kk)) - 1e-9));
}

inline double vec_norm(const std::array<double, 3>& v, int dim) {
    double s = 0;
    for (int j = 0; j < dim; ++j) s += v[j] * v[j];
    return std::sqrt(s);
}

}  // namespace detail

/// Measures the condition's quantity over all modes 0 < |k| <= K and the
/// given nu list. A1 passes below 1e-12; A2/A2*/A3 pass when the sup over
/// the outer shells (K/2, K] does not exceed the sup over [1, K/2] by more
/// than 5% (finite plateau); A5 passes when the per-mode difference decays
/// in nu with fitted log-log rate >= 0.5 at the reference mode.
inline ConditionAuditReport audit_condition(LawKind law, Condition condition, int K,
                                            const std::vector<double>& nu_values) {
    if (K < 8) throw ConfigError("audit shell cutoff K must be >= 8, got " + std::to_string(K));
    const int dim = law_dimension(law);

    ConditionAuditReport report;
    report.condition = condition;
    report.law = law;
    report.nu_values = nu_values;
    report.K = K;
    report.shells.resize(K);
    for (int r = 0; r < K; ++r) report.shells[r].radius = r + 1;

    auto quantity = [&](const ConstitutiveLaw& cl, const std::array<int, 3>& k,
                        std::int64_t kk, bool* singular) -> double {
        auto m = cl.symbol(k, singular);
        double kabs = std::sqrt(static_cast<double>(kk));
        switch (condition) {
            case Condition::A1: {
                double dot = 0;
                for (int j = 0; j < dim; ++j) dot += static_cast<double>(k[j]) * m[j];
                return std::abs(dot);
            }
            case Condition::A2:
                return detail::vec_norm(m, dim) / kabs;
            case Condition::A2Star:
                return detail::vec_norm(m, dim);
            case Condition::A3:
                return static_cast<double>(kk) * detail::vec_norm(m, dim);
            case Condition::A5: {
                auto m0 = ConstitutiveLaw{law, 0.0}.symbol(k, singular);
                double s = 0;
                for (int j = 0; j < dim; ++j) s += (m[j] - m0[j]) * (m[j] - m0[j]);
                return std::sqrt(s);
            }
        }
        return 0.0;
    };

    for (double nu : nu_values) {
        ConstitutiveLaw cl{law, nu};
        detail::for_each_mode(dim, K, [&](const std::array<int, 3>& k, std::int64_t kk) {
            bool singular = false;
            double q = quantity(cl, k, kk, &singular);
            if (singular) {
                ++report.singular_modes;
                return;
            }
            int shell = detail::shell_of(kk);
            report.shells[shell - 1].sup = std::max(report.shells[shell - 1].sup, q);
            report.measured_sup = std::max(report.measured_sup, q);
        });
    }

    switch (condition) {
        case Condition::A1:
            report.threshold_rule = "sup |k.m| <= 1e-12";
            report.pass = report.measured_sup <= 1e-12;
            break;
        case Condition::A2:
        case Condition::A2Star:
        case Condition::A3: {
            double sup_low = 0, sup_high = 0;
            for (const auto& s : report.shells)
                (s.radius <= K / 2 ? sup_low : sup_high) = std::max(
                    s.radius <= K / 2 ? sup_low : sup_high, s.sup);
            report.threshold_rule = "sup over shells (K/2,K] <= 1.05 * sup over [1,K/2]";
            report.pass = sup_high <= 1.05 * sup_low;
            break;
        }
        case Condition::A5: {
            report.reference_k = dim == 2 ? std::array<int, 3>{1, 1, 0}
                                          : std::array<int, 3>{1, 1, 1};
            std::vector<double> lx, ly;
            ConstitutiveLaw ref0{law, 0.0};
            auto m0 = ref0.symbol(report.reference_k);
            for (double nu : nu_values) {
                if (nu <= 0) continue;
                auto m = ConstitutiveLaw{law, nu}.symbol(report.reference_k);
                double s = 0;
                for (int j = 0; j < dim; ++j) s += (m[j] - m0[j]) * (m[j] - m0[j]);
                if (s > 0) {
                    lx.push_back(std::log(nu));
                    ly.push_back(0.5 * std::log(s));
                }
            }
            report.threshold_rule = "log-log rate of |m^nu - m^0| at reference k >= 0.5";
            if (lx.size() >= 2) {
                auto fit = fit_linear(lx, ly);
                report.fitted_rate = fit.slope;
                report.fit_r_squared = fit.r_squared;
                report.pass = fit.slope >= 0.5;
            }
            break;
        }
    }
    return report;
}

inline nlohmann::json to_json(const ConditionAuditReport& r) {
    nlohmann::json shells = nlohmann::json::array();
    for (const auto& s : r.shells) shells.push_back({{"radius", s.radius}, {"sup", s.sup}});
    nlohmann::json j{{"condition", condition_name(r.condition)},
                     {"law", law_name(r.law)},
                     {"nu_values", r.nu_values},
                     {"K", r.K},
                     {"measured_sup", r.measured_sup},
                     {"pass", r.pass},
                     {"shells", shells},
                     {"singular_modes", r.singular_modes},
                     {"threshold_rule", r.threshold_rule},
                     {"a4_note", "A4 (Linf->BMO boundedness) not audited: "
                                 "not certifiable from finite shells"}};
    if (r.condition == Condition::A5) {
        j["fitted_rate"] = r.fitted_rate;
        j["fit_r_squared"] = r.fit_r_squared;
        j["reference_k"] = std::vector<int>(r.reference_k.begin(),
                                            r.reference_k.begin() + law_dimension(r.law));
    }
    return j;
}

}  // namespace asl
