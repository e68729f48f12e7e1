#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace asl {

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    double rms_residual = 0.0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    f.rms_residual = std::sqrt(ss_res / n);
    return f;
}

struct QuadraticFit {
    // y = c0 + c1 x + c2 x^2
    std::array<double, 3> coeff{0.0, 0.0, 0.0};
    double rms_residual = 0.0;
    double max_positive_deviation = 0.0;  // max over samples of (y - fit)
};

inline QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    // Normal equations for the 3x3 Vandermonde system, solved by Gaussian
    // elimination with partial pivoting.
    double a[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        double p[3] = {1.0, x[i], x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += p[r] * p[c];
            a[r][3] += p[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(a[col][c], a[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            double f = a[r][col] / a[col][col];
            for (int c = 0; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    QuadraticFit q;
    for (int r = 0; r < 3; ++r) q.coeff[r] = a[r][r] != 0.0 ? a[r][3] / a[r][r] : 0.0;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = q.coeff[0] + q.coeff[1] * x[i] + q.coeff[2] * x[i] * x[i];
        double r = y[i] - fit;
        ss += r * r;
        q.max_positive_deviation = std::max(q.max_positive_deviation, r);
    }
    q.rms_residual = std::sqrt(ss / n);
    return q;
}

}  // namespace asl
