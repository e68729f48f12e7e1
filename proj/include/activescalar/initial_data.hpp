#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "activescalar/spectral_field.hpp"

namespace asl {

struct ModeSpec {
    std::array<int, 3> k{0, 0, 0};
    std::complex<double> amplitude;
};

/// Recipe for initial data or forcing. Every realization is Hermitian,
/// zero-mean and supported inside the dealiased region.
struct FieldSpec {
    enum class Kind { Zero, Modes, RandomSpectrum, GevreySpectrum };
    Kind kind = Kind::Zero;

    std::vector<ModeSpec> modes;   // Kind::Modes

    // Kind::RandomSpectrum: |theta(k)| = A |k|^-slope with random phases,
    // A set so the L2 norm hits l2_target.
    double spectrum_slope = 2.0;
    double l2_target = 1.0;
    int max_wavenumber = 0;        // 0 = dealias cutoff

    // Kind::GevreySpectrum: |theta(k)| = A e^{-tau0 |k|^{1/s}}.
    double tau0 = 0.7;
    double gevrey_s = 1.0;

    std::uint64_t seed_offset = 0;
};

namespace detail {

// Uniform phase in [0,2pi) straight from the raw 64-bit stream; avoids the
// implementation-defined std::uniform_real_distribution.
inline double draw_phase(std::mt19937_64& rng) {
    return 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline SpectralField build_field(const FieldSpec& spec, const Grid& grid,
                                 std::uint64_t seed) {
    SpectralField f(grid);
    const int cutoff = grid.dealias_cutoff();

    switch (spec.kind) {
        case FieldSpec::Kind::Zero:
            break;
        case FieldSpec::Kind::Modes:
            for (const auto& mode : spec.modes) {
                if (grid.k_squared(mode.k) == 0) continue;
                f.at(mode.k) += mode.amplitude;
                f.at(grid.negate(mode.k)) += std::conj(mode.amplitude);
            }
            break;
        case FieldSpec::Kind::RandomSpectrum:
        case FieldSpec::Kind::GevreySpectrum: {
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL + spec.seed_offset));
            const int kmax = spec.kind == FieldSpec::Kind::RandomSpectrum &&
                                     spec.max_wavenumber > 0
                                 ? std::min(spec.max_wavenumber, cutoff)
                                 : cutoff;
            const std::int64_t kmax2 = static_cast<std::int64_t>(kmax) * kmax;
            const std::size_t size = grid.size();
            for (std::size_t i = 0; i < size; ++i) {
                auto k = grid.wavevector(i);
                if (!grid.is_canonical(k)) continue;
                std::int64_t kk = grid.k_squared(k);
                if (kk > kmax2) continue;
                bool in_band = true;
                for (int j = 0; j < grid.dim; ++j)
                    if (std::abs(k[j]) > cutoff) in_band = false;
                if (!in_band) continue;
                double kabs = std::sqrt(static_cast<double>(kk));
                double amp = spec.kind == FieldSpec::Kind::RandomSpectrum
                                 ? std::pow(kabs, -spec.spectrum_slope)
                                 : std::exp(-spec.tau0 * std::pow(kabs, 1.0 / spec.gevrey_s));
                double phase = detail::draw_phase(rng);
                std::complex<double> c = amp * std::polar(1.0, phase);
                f.coeffs[i] = c;
                f.at(grid.negate(k)) = std::conj(c);
            }
            double norm = l2_norm(f);
            if (norm > 0) {
                double scale = spec.l2_target / norm;
                for (auto& c : f.coeffs) c *= scale;
            }
            break;
        }
    }
    f = dealias(std::move(f));
    f.coeffs[0] = 0.0;
    return f;
}

}  // namespace asl
