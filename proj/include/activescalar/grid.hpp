#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>

#include "activescalar/errors.hpp"

namespace asl {

/// Uniform Fourier grid on [0,2pi]^d with integer wavenumbers.
/// Storage is the full complex lattice in row-major order; array index j
/// along each axis maps to wavenumber k = j for j <= n/2 and k = j - n
/// otherwise, so k ranges over [-n/2+1, n/2].
struct Grid {
    int dim = 2;
    int n = 0;

    std::size_t size() const {
        std::size_t s = 1;
        for (int j = 0; j < dim; ++j) s *= static_cast<std::size_t>(n);
        return s;
    }

    int wavenumber(int index) const { return index <= n / 2 ? index : index - n; }
    int index_of(int k) const { return k >= 0 ? k : k + n; }

    std::array<int, 3> wavevector(std::size_t flat) const {
        std::array<int, 3> k{0, 0, 0};
        for (int j = dim - 1; j >= 0; --j) {
            k[j] = wavenumber(static_cast<int>(flat % n));
            flat /= n;
        }
        return k;
    }

    std::size_t flat_index(const std::array<int, 3>& k) const {
        std::size_t f = 0;
        for (int j = 0; j < dim; ++j) f = f * n + static_cast<std::size_t>(index_of(k[j]));
        return f;
    }

    // |k|^2 in exact integer arithmetic.
    static std::int64_t k_squared(const std::array<int, 3>& k, int dim) {
        std::int64_t s = 0;
        for (int j = 0; j < dim; ++j) s += static_cast<std::int64_t>(k[j]) * k[j];
        return s;
    }
    std::int64_t k_squared(const std::array<int, 3>& k) const { return k_squared(k, dim); }

    bool is_nyquist(const std::array<int, 3>& k) const {
        for (int j = 0; j < dim; ++j)
            if (k[j] == n / 2) return true;
        return false;
    }

    // Exactly one of {k,-k} is canonical for k != 0; used when a symbol must
    // be applied Hermitian-symmetrically. Zero mode is not canonical.
    bool is_canonical(const std::array<int, 3>& k) const {
        for (int j = dim - 1; j >= 0; --j) {
            if (k[j] > 0) return true;
            if (k[j] < 0) return false;
        }
        return false;
    }

    std::array<int, 3> negate(const std::array<int, 3>& k) const {
        std::array<int, 3> m{0, 0, 0};
        for (int j = 0; j < dim; ++j) m[j] = -k[j];
        return m;
    }

    int dealias_cutoff() const { return n / 3; }

    bool operator==(const Grid&) const = default;
};

inline Grid make_grid(int d, int n) {
    if (d != 2 && d != 3) throw BadDimension(d);
    if (n % 2 != 0 || n < 8) throw OddResolution(n);
    return Grid{d, n};
}

}  // namespace asl
