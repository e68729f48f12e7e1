#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "activescalar/constitutive.hpp"
#include "activescalar/gevrey.hpp"
#include "activescalar/initial_data.hpp"
#include "activescalar/spectral_field.hpp"

namespace asl {

enum class Integrator { RK4IF, AB2IF };

inline std::string integrator_name(Integrator i) {
    return i == Integrator::RK4IF ? "rk4-if" : "ab2-if";
}

inline Integrator integrator_from_name(const std::string& name) {
    if (name == "rk4-if" || name == "rk4") return Integrator::RK4IF;
    if (name == "ab2-if" || name == "ab2") return Integrator::AB2IF;
    throw ConfigError("unknown integrator '" + name + "' (expected rk4-if|ab2-if)");
}

/// Full description of one trajectory of
///   dtheta/dt + u.grad(theta) = -kappa Lambda^gamma theta + S,  u = M^nu[theta].
struct SolverConfig {
    ConstitutiveLaw law;
    double kappa = 0.0;
    double gamma = 2.0;
    int n = 64;
    int dim = 2;
    double dt = 1e-3;
    double t_end = 1.0;
    Integrator integrator = Integrator::RK4IF;
    FieldSpec initial_data;
    FieldSpec forcing;
    long checkpoint_every = 100;
    std::uint64_t seed = 0;
    std::vector<double> hs_list{1.0};
    double gevrey_fit_s = 0.0;   // > 0: estimate the analyticity radius at checkpoints
    bool auto_halve_dt = false;  // CFL violations halve dt instead of only warning
    bool strict = false;         // warnings become errors

    void validate() const {
        if (dim != 2 && dim != 3) throw BadDimension(dim);
        if (n % 2 != 0 || n < 8) throw OddResolution(n);
        if (!(gamma > 0.0 && gamma <= 2.0)) throw GammaOutOfRange(gamma);
        if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
        if (law.nu < 0.0) throw ConfigError("nu must be >= 0");
        if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
        if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
        if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
        if (law.dimension() != dim)
            throw ConfigError("law '" + law.name() + "' is " +
                              std::to_string(law.dimension()) + "D but config says d=" +
                              std::to_string(dim));
    }
};

/// Per-checkpoint scalar observables.
struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    std::vector<double> hs;          // parallel to SolverConfig::hs_list
    double linf = 0.0;
    double grad_ld = 0.0;            // |grad theta|_{L^d}
    double energy_residual = 0.0;
    std::optional<double> gevrey_tau;
    double dealias_energy_fraction = 0.0;
    long step = 0;
};

struct StepState {
    double t = 0.0;
    long step = 0;
    SpectralField theta;
    std::optional<SpectralField> prev_rhs;  // AB2 history: g(theta_{n-1})
    // Running energy budget, integrated alongside the state.
    double diss_integral = 0.0;    // kappa int |Lambda^{gamma/2} theta|^2 dt
    double force_integral = 0.0;   // int <S, theta> dt
    double energy0 = 0.0;          // half |theta(t0)|^2 at budget start
    double max_half_l2sq = 0.0;
};

struct RunResult {
    StepState state;
    std::vector<DiagnosticsRecord> series;
    std::vector<std::string> warnings;
};

class RunBlowUp : public BlowUpError {
public:
    RunBlowUp(double t, long step, std::vector<DiagnosticsRecord> partial)
        : BlowUpError(t, step,
                      "blow-up at t=" + std::to_string(t) + " step " + std::to_string(step) +
                          " (H^1 norm above 1e12 or non-finite state)"),
          partial_series(std::move(partial)) {}
    std::vector<DiagnosticsRecord> partial_series;
};

/// N = -(u.grad theta)^, computed pseudo-spectrally: velocity by multiplier,
/// gradient by ik, product pointwise on the grid, then dealias and project.
/// Physical factors enter as their real parts, so the result is Hermitian to
/// rounding regardless of accumulated imaginary drift.
inline SpectralField nonlinear_term(const SpectralField& theta, const ConstitutiveLaw& law) {
    const Grid& grid = theta.grid;
    VectorField u = compute_velocity(law, theta);
    std::vector<double> prod(grid.size(), 0.0);
    for (int j = 0; j < grid.dim; ++j) {
        std::vector<double> uj = inverse(u.components[j]);
        std::vector<double> dj = inverse(derivative(theta, j));
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] -= uj[i] * dj[i];
    }
    return project_zero_mean(dealias(forward(grid, prod)));
}

namespace detail {

// Per-mode integrating factors e^{-kappa |k|^gamma dt/2} and its square.
struct StiffFactors {
    std::vector<double> half;
    std::vector<double> full;

    StiffFactors(const Grid& grid, double kappa, double gamma, double dt) {
        const std::size_t size = grid.size();
        half.resize(size);
        full.resize(size);
        for (std::size_t i = 0; i < size; ++i) {
            auto k = grid.wavevector(i);
            std::int64_t kk = grid.k_squared(k);
            double lam = kk == 0 ? 0.0
                                 : kappa * std::pow(static_cast<double>(kk), 0.5 * gamma);
            half[i] = std::exp(-0.5 * lam * dt);
            full[i] = half[i] * half[i];
        }
    }
};

}  // namespace detail

/// Advances one trajectory; owns the forcing realization, the stiff-factor
/// tables and the energy budget.
class Runner {
public:
    explicit Runner(SolverConfig config) : config_(std::move(config)) {
        config_.validate();
        grid_ = make_grid(config_.dim, config_.n);
        forcing_ = build_field(config_.forcing, grid_, config_.seed);
        state_.theta = build_field(config_.initial_data, grid_, config_.seed);
        apply_cfl_policy();
        factors_.emplace(grid_, config_.kappa, config_.gamma, config_.dt);
        reset_budget();
    }

    Runner(SolverConfig config, StepState resumed) : config_(std::move(config)) {
        config_.validate();
        grid_ = make_grid(config_.dim, config_.n);
        forcing_ = build_field(config_.forcing, grid_, config_.seed);
        state_ = std::move(resumed);
        if (state_.theta.grid != grid_)
            throw ShapeMismatch("resume: checkpoint grid does not match config");
        factors_.emplace(grid_, config_.kappa, config_.gamma, config_.dt);
    }

    const SolverConfig& config() const { return config_; }
    const StepState& state() const { return state_; }
    const SpectralField& forcing() const { return forcing_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void step() {
        const double h = config_.dt;
        const auto& eh = factors_->half;
        const auto& ef = factors_->full;
        const std::size_t size = grid_.size();

        if (config_.integrator == Integrator::AB2IF && state_.prev_rhs) {
            SpectralField gn = rhs(state_.theta);
            SpectralField next(grid_);
            const auto& gp = state_.prev_rhs->coeffs;
            for (std::size_t i = 0; i < size; ++i)
                next.coeffs[i] = ef[i] * (state_.theta.coeffs[i] + h * 1.5 * gn.coeffs[i]) -
                                 h * 0.5 * ef[i] * ef[i] * gp[i];
            accumulate_budget_trapezoid(state_.theta, next, h);
            state_.prev_rhs = std::move(gn);
            commit(std::move(next));
            return;
        }

        // RK4 with exact per-mode integrating factor for the dissipation.
        SpectralField g1 = rhs(state_.theta);
        SpectralField y2(grid_), y3(grid_), y4(grid_);
        for (std::size_t i = 0; i < size; ++i)
            y2.coeffs[i] = eh[i] * (state_.theta.coeffs[i] + 0.5 * h * g1.coeffs[i]);
        SpectralField g2 = rhs(y2);
        for (std::size_t i = 0; i < size; ++i)
            y3.coeffs[i] = eh[i] * state_.theta.coeffs[i] + 0.5 * h * g2.coeffs[i];
        SpectralField g3 = rhs(y3);
        for (std::size_t i = 0; i < size; ++i)
            y4.coeffs[i] = ef[i] * state_.theta.coeffs[i] + h * eh[i] * g3.coeffs[i];
        SpectralField g4 = rhs(y4);

        SpectralField next(grid_);
        for (std::size_t i = 0; i < size; ++i)
            next.coeffs[i] = ef[i] * state_.theta.coeffs[i] +
                             h / 6.0 *
                                 (ef[i] * g1.coeffs[i] + 2.0 * eh[i] * g2.coeffs[i] +
                                  2.0 * eh[i] * g3.coeffs[i] + g4.coeffs[i]);

        state_.diss_integral += h / 6.0 *
                                (dissipation_rate(state_.theta) + 2.0 * dissipation_rate(y2) +
                                 2.0 * dissipation_rate(y3) + dissipation_rate(y4));
        state_.force_integral += h / 6.0 *
                                 (inner_product(forcing_, state_.theta) +
                                  2.0 * inner_product(forcing_, y2) +
                                  2.0 * inner_product(forcing_, y3) +
                                  inner_product(forcing_, y4));

        if (config_.integrator == Integrator::AB2IF) state_.prev_rhs = std::move(g1);
        commit(std::move(next));
    }

    RunResult run(const std::vector<double>& snapshot_times = {},
                  std::vector<SpectralField>* snapshots = nullptr) {
        const long total_steps = std::llround(config_.t_end / config_.dt);
        std::vector<long> snap_steps;
        for (double ts : snapshot_times) snap_steps.push_back(std::llround(ts / config_.dt));
        if (snapshots) snapshots->assign(snapshot_times.size(), SpectralField(grid_));

        std::vector<DiagnosticsRecord> series;
        auto maybe_snapshot = [&] {
            for (std::size_t i = 0; i < snap_steps.size(); ++i)
                if (snap_steps[i] == state_.step && snapshots) (*snapshots)[i] = state_.theta;
        };

        series.push_back(record());
        maybe_snapshot();
        try {
            while (state_.step < total_steps) {
                step();
                maybe_snapshot();
                if (state_.step % config_.checkpoint_every == 0 || state_.step == total_steps)
                    series.push_back(record());
            }
        } catch (const BlowUpError& e) {
            throw RunBlowUp(e.t, e.step, std::move(series));
        }
        return RunResult{std::move(state_), std::move(series), warnings_};
    }

    DiagnosticsRecord record() {
        DiagnosticsRecord rec;
        rec.t = state_.t;
        rec.step = state_.step;
        rec.l2 = l2_norm(state_.theta);
        for (double s : config_.hs_list) rec.hs.push_back(sobolev_norm(state_.theta, s));

        std::vector<double> phys = inverse(state_.theta);
        for (double v : phys) rec.linf = std::max(rec.linf, std::abs(v));

        rec.grad_ld = grad_norm_ld(state_.theta);

        double half_l2sq = 0.5 * rec.l2 * rec.l2;
        state_.max_half_l2sq = std::max(state_.max_half_l2sq, half_l2sq);
        double budget = half_l2sq - state_.energy0 + state_.diss_integral -
                        state_.force_integral;
        rec.energy_residual =
            state_.max_half_l2sq > 0 ? std::abs(budget) / state_.max_half_l2sq : 0.0;

        rec.dealias_energy_fraction = dealias_energy_fraction(state_.theta);

        if (config_.gevrey_fit_s > 0.0) {
            try {
                rec.gevrey_tau = estimate_gevrey_radius(state_.theta, config_.gevrey_fit_s).tau_hat;
            } catch (const InsufficientDecay&) {
                rec.gevrey_tau = std::nullopt;
            }
        }
        return rec;
    }

    double grad_norm_ld(const SpectralField& theta) const {
        std::vector<double> mag2(grid_.size(), 0.0);
        for (int j = 0; j < grid_.dim; ++j) {
            std::vector<double> dj = inverse(derivative(theta, j));
            for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += dj[i] * dj[i];
        }
        const double d = static_cast<double>(grid_.dim);
        long double acc = 0.0L;
        for (double m2 : mag2) acc += std::pow(static_cast<long double>(m2), 0.5L * d);
        return std::pow(static_cast<double>(acc / static_cast<long double>(mag2.size())),
                        1.0 / d);
    }

    static double dealias_energy_fraction_of(const SpectralField& f) {
        const int cutoff = f.grid.dealias_cutoff();
        const int band = 2 * cutoff / 3;
        long double total = 0.0L, top = 0.0L;
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
            auto k = f.grid.wavevector(i);
            double e = std::norm(f.coeffs[i]);
            total += e;
            int kmax = 0;
            for (int j = 0; j < f.grid.dim; ++j) kmax = std::max(kmax, std::abs(k[j]));
            if (kmax > band) top += e;
        }
        return total > 0 ? static_cast<double>(top / total) : 0.0;
    }

    double dealias_energy_fraction(const SpectralField& f) const {
        return dealias_energy_fraction_of(f);
    }

private:
    SpectralField rhs(const SpectralField& theta) {
        SpectralField g = nonlinear_term(theta, config_.law);
        for (std::size_t i = 0; i < g.coeffs.size(); ++i) g.coeffs[i] += forcing_.coeffs[i];
        return g;
    }

    double dissipation_rate(const SpectralField& theta) const {
        if (config_.kappa == 0.0) return 0.0;
        long double acc = 0.0L;
        for (std::size_t i = 0; i < theta.coeffs.size(); ++i) {
            auto k = grid_.wavevector(i);
            std::int64_t kk = grid_.k_squared(k);
            if (kk == 0) continue;
            double a2 = std::norm(theta.coeffs[i]);
            if (a2 == 0.0) continue;
            acc += a2 * std::pow(static_cast<double>(kk), 0.5 * config_.gamma);
        }
        return config_.kappa * static_cast<double>(acc);
    }

    void accumulate_budget_trapezoid(const SpectralField& a, const SpectralField& b, double h) {
        state_.diss_integral += 0.5 * h * (dissipation_rate(a) + dissipation_rate(b));
        state_.force_integral +=
            0.5 * h * (inner_product(forcing_, a) + inner_product(forcing_, b));
    }

    void commit(SpectralField next) {
        next.coeffs[0] = 0.0;
        state_.theta = std::move(next);
        ++state_.step;
        state_.t = static_cast<double>(state_.step) * config_.dt;
        double h1 = sobolev_norm(state_.theta, 1.0);
        if (!std::isfinite(h1) || h1 > 1e12 || !all_finite(state_.theta))
            throw BlowUpError(state_.t, state_.step,
                              "H^1 norm " + std::to_string(h1) + " at t=" +
                                  std::to_string(state_.t));
    }

    void reset_budget() {
        double l2 = l2_norm(state_.theta);
        state_.energy0 = 0.5 * l2 * l2;
        state_.max_half_l2sq = state_.energy0;
    }

    void apply_cfl_policy() {
        VectorField u = compute_velocity(config_.law, state_.theta);
        double umax = 0.0;
        std::vector<std::vector<double>> comps;
        for (int j = 0; j < grid_.dim; ++j) comps.push_back(inverse(u.components[j]));
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double m2 = 0;
            for (int j = 0; j < grid_.dim; ++j) m2 += comps[j][i] * comps[j][i];
            umax = std::max(umax, std::sqrt(m2));
        }
        const double kmax = static_cast<double>(grid_.dealias_cutoff());
        while (config_.dt * kmax * umax > 0.5) {
            if (config_.auto_halve_dt) {
                config_.dt *= 0.5;
                warnings_.push_back("CFL advisory exceeded at t=0; dt halved to " +
                                    std::to_string(config_.dt));
            } else {
                std::string msg = "CFL advisory exceeded at t=0: dt*kmax*|u|max = " +
                                  std::to_string(config_.dt * kmax * umax) + " > 0.5";
                if (config_.strict) throw ConfigError(msg);
                warnings_.push_back(msg);
                break;
            }
        }
    }

    SolverConfig config_;
    Grid grid_;
    SpectralField forcing_;
    StepState state_;
    std::optional<detail::StiffFactors> factors_;
    std::vector<std::string> warnings_;
};

inline RunResult run(const SolverConfig& config) { return Runner(config).run(); }

}  // namespace asl
