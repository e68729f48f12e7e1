#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "activescalar/errors.hpp"
#include "activescalar/fft.hpp"
#include "activescalar/grid.hpp"

namespace asl {

/// Truncated Fourier representation of a real, zero-mean scalar on [0,2pi]^d.
/// Normalization: the coefficient of e^{i k.x} is stored directly, so
/// applying a Fourier multiplier m(k) is literal per-mode multiplication.
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}

    std::complex<double>& at(const std::array<int, 3>& k) { return coeffs[grid.flat_index(k)]; }
    const std::complex<double>& at(const std::array<int, 3>& k) const {
        return coeffs[grid.flat_index(k)];
    }
};

struct VectorField {
    Grid grid;
    std::vector<SpectralField> components;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g) {
        components.assign(g.dim, SpectralField(g));
    }
};

inline SpectralField forward(const Grid& grid, const std::vector<double>& samples) {
    if (samples.size() != grid.size())
        throw ShapeMismatch("forward: sample count " + std::to_string(samples.size()) +
                            " does not match grid size " + std::to_string(grid.size()));
    std::vector<std::complex<double>> buf(samples.begin(), samples.end());
    SpectralField out(grid);
    detail::FftPlans::instance().execute(grid, FFTW_FORWARD, buf.data(), out.coeffs.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

inline std::vector<std::complex<double>> inverse_complex(const SpectralField& f) {
    std::vector<std::complex<double>> out(f.grid.size());
    std::vector<std::complex<double>> in(f.coeffs);
    detail::FftPlans::instance().execute(f.grid, FFTW_BACKWARD, in.data(), out.data());
    return out;
}

inline std::vector<double> inverse(const SpectralField& f) {
    auto c = inverse_complex(f);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

inline SpectralField project_zero_mean(SpectralField f) {
    f.coeffs[0] = 0.0;
    return f;
}

/// Multiplies coeff(k) by |k|^gamma; zero mode stays zero.
inline SpectralField fractional_laplacian(const SpectralField& f, double gamma) {
    if (!(gamma > 0.0 && gamma <= 2.0)) throw GammaOutOfRange(gamma);
    SpectralField out(f.grid);
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        std::int64_t k2 = f.grid.k_squared(k);
        if (k2 == 0) continue;
        out.coeffs[i] = f.coeffs[i] * std::pow(static_cast<double>(k2), 0.5 * gamma);
    }
    return out;
}

/// ( sum_{k!=0} |k|^{2s} |f(k)|^2 )^{1/2}, accumulated in extended precision.
inline double sobolev_norm(const SpectralField& f, double s) {
    long double acc = 0.0L;
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        std::int64_t k2 = f.grid.k_squared(k);
        if (k2 == 0) continue;
        double a2 = std::norm(f.coeffs[i]);
        if (a2 == 0.0) continue;
        acc += static_cast<long double>(a2) *
               std::pow(static_cast<long double>(k2), static_cast<long double>(s));
    }
    return std::sqrt(static_cast<double>(acc));
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

/// Gevrey norm ( sum_{k!=0} |k|^{2r} e^{2 tau |k|^{1/s}} |f(k)|^2 )^{1/2}.
/// Returns nullopt instead of Inf when any term overflows double range.
inline std::optional<double> gevrey_norm(const SpectralField& f, double tau, double s,
                                         double r) {
    const double log_max = std::log(std::numeric_limits<double>::max());
    long double acc = 0.0L;
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        std::int64_t k2 = f.grid.k_squared(k);
        if (k2 == 0) continue;
        double a2 = std::norm(f.coeffs[i]);
        if (a2 == 0.0) continue;
        double kabs = std::sqrt(static_cast<double>(k2));
        double log_term = std::log(a2) + 2.0 * r * std::log(kabs) +
                          2.0 * tau * std::pow(kabs, 1.0 / s);
        if (log_term >= log_max) return std::nullopt;
        acc += std::exp(static_cast<long double>(log_term));
    }
    if (!std::isfinite(static_cast<double>(acc))) return std::nullopt;
    return std::sqrt(static_cast<double>(acc));
}

/// 2/3-rule sharp cutoff: zero every mode with any |k_j| > n/3.
inline SpectralField dealias(SpectralField f) {
    const int cutoff = f.grid.dealias_cutoff();
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        for (int j = 0; j < f.grid.dim; ++j) {
            if (std::abs(k[j]) > cutoff) {
                f.coeffs[i] = 0.0;
                break;
            }
        }
    }
    return f;
}

/// d/dx_j as ik_j multiplication; Nyquist modes zeroed (their derivative is
/// sign-ambiguous on an even grid).
inline SpectralField derivative(const SpectralField& f, int axis) {
    SpectralField out(f.grid);
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        if (f.grid.is_nyquist(k)) continue;
        out.coeffs[i] = f.coeffs[i] * std::complex<double>(0.0, static_cast<double>(k[axis]));
    }
    return out;
}

/// Re sum_k f(k) conj(g(k)); equals the normalized physical inner product
/// (2pi)^{-d} int f g dx for real fields.
inline double inner_product(const SpectralField& f, const SpectralField& g) {
    long double acc = 0.0L;
    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i)
        acc += static_cast<long double>((f.coeffs[i] * std::conj(g.coeffs[i])).real());
    return static_cast<double>(acc);
}

inline bool all_finite(const SpectralField& f) {
    for (const auto& c : f.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace asl
