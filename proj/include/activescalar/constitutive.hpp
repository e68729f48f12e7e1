#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "activescalar/errors.hpp"
#include "activescalar/spectral_field.hpp"

namespace asl {

enum class LawKind { MG, IPMB, SQG };

inline std::string law_name(LawKind kind) {
    switch (kind) {
        case LawKind::MG: return "mg";
        case LawKind::IPMB: return "ipmb";
        case LawKind::SQG: return "sqg";
    }
    return "?";
}

inline LawKind law_from_name(const std::string& name) {
    if (name == "mg") return LawKind::MG;
    if (name == "ipmb") return LawKind::IPMB;
    if (name == "sqg") return LawKind::SQG;
    throw ConfigError("unknown constitutive law '" + name + "' (expected mg|ipmb|sqg)");
}

inline int law_dimension(LawKind kind) { return kind == LawKind::MG ? 3 : 2; }

/// Magnetogeostrophic multiplier, 3D. Integer powers of k are formed in
/// exact int64 arithmetic before any float conversion so the denominator
/// D(k) = |k|^2 k3^2 + (k2^2 + nu |k|^4)^2 never suffers cancellation.
/// At nu=0 the symbol is undefined on {k2=k3=0, k1!=0}; we return the zero
/// vector there and set *singular, which keeps u divergence-free.
inline std::array<double, 3> mg_symbol(double nu, const std::array<int, 3>& k,
                                       bool* singular = nullptr) {
    if (singular) *singular = false;
    const std::int64_t k1 = k[0], k2 = k[1], k3 = k[2];
    const std::int64_t kk = k1 * k1 + k2 * k2 + k3 * k3;
    const double k4 = static_cast<double>(kk) * static_cast<double>(kk);
    const double e = static_cast<double>(k2 * k2) + nu * k4;  // k2^2 + nu|k|^4
    const double denom = static_cast<double>(kk * k3 * k3) + e * e;
    if (denom == 0.0) {
        if (singular) *singular = true;
        return {0.0, 0.0, 0.0};
    }
    const double m1 = (static_cast<double>(k2 * k3 * kk) - static_cast<double>(k1 * k3) * e) / denom;
    const double m2 = (-static_cast<double>(k1 * k3 * kk) - static_cast<double>(k2 * k3) * e) / denom;
    const double m3 = static_cast<double>(k1 * k1 + k2 * k2) * e / denom;
    return {m1, m2, m3};
}

/// Incompressible porous media with Brinkman smoothing, 2D.
inline std::array<double, 2> ipmb_symbol(double nu, const std::array<int, 2>& k) {
    const std::int64_t k1 = k[0], k2 = k[1];
    const std::int64_t kk = k1 * k1 + k2 * k2;
    const double pre = 1.0 / (1.0 + nu * static_cast<double>(kk));
    return {pre * static_cast<double>(k1 * k2) / static_cast<double>(kk),
            -pre * static_cast<double>(k1 * k1) / static_cast<double>(kk)};
}

/// Modified surface quasi-geostrophic multiplier, 2D.
inline std::array<double, 2> sqg_symbol(double nu, const std::array<int, 2>& k) {
    const std::int64_t k1 = k[0], k2 = k[1];
    const std::int64_t kk = k1 * k1 + k2 * k2;
    const double kabs = std::sqrt(static_cast<double>(kk));
    const double pre = 1.0 / (1.0 + nu * static_cast<double>(kk));
    return {pre * static_cast<double>(k2) / kabs, -pre * static_cast<double>(k1) / kabs};
}

/// A named multiplier family nu -> m^nu(k) mapping theta(k) to u(k).
struct ConstitutiveLaw {
    LawKind kind = LawKind::SQG;
    double nu = 0.0;

    int dimension() const { return law_dimension(kind); }
    std::string name() const { return law_name(kind); }

    std::array<double, 3> symbol(const std::array<int, 3>& k, bool* singular = nullptr) const {
        if (singular) *singular = false;
        switch (kind) {
            case LawKind::MG:
                return mg_symbol(nu, k, singular);
            case LawKind::IPMB: {
                auto m = ipmb_symbol(nu, {k[0], k[1]});
                return {m[0], m[1], 0.0};
            }
            case LawKind::SQG: {
                auto m = sqg_symbol(nu, {k[0], k[1]});
                return {m[0], m[1], 0.0};
            }
        }
        return {0.0, 0.0, 0.0};
    }
};

/// u_j(k) = m_j(k) theta(k), applied on the canonical half-lattice and
/// mirrored conjugate-symmetrically so a real theta always yields a real u
/// (the odd SQG symbol is not Hermitian by itself). Nyquist modes carry no
/// velocity.
inline VectorField compute_velocity(const ConstitutiveLaw& law, const SpectralField& theta) {
    const Grid& grid = theta.grid;
    if (law.dimension() != grid.dim)
        throw ShapeMismatch("compute_velocity: law '" + law.name() + "' is " +
                            std::to_string(law.dimension()) + "D but grid is " +
                            std::to_string(grid.dim) + "D");
    VectorField u(grid);
    const std::size_t size = grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = grid.wavevector(i);
        if (grid.is_nyquist(k)) continue;
        if (grid.is_canonical(k)) {
            auto m = law.symbol(k);
            auto neg = grid.negate(k);
            std::size_t ineg = grid.flat_index(neg);
            for (int j = 0; j < grid.dim; ++j) {
                std::complex<double> v = m[j] * theta.coeffs[i];
                u.components[j].coeffs[i] = v;
                u.components[j].coeffs[ineg] = std::conj(v);
            }
        }
    }
    return u;
}

}  // namespace asl
