#pragma once

#include <cmath>
#include <vector>

#include "activescalar/fitting.hpp"
#include "activescalar/spectral_field.hpp"

namespace asl {

struct GevreyEstimate {
    double tau_hat = 0.0;
    double s = 1.0;
    double fit_residual = 0.0;   // rms residual of the log-amplitude fit
    int shells_used = 0;
    int shell_min = 0;
    int shell_max = 0;
};

/// Infers the analyticity radius tau from the decay of shell-maximal
/// coefficient amplitudes, |theta(k)| ~ e^{-tau |k|^{1/s}}. Uses max per
/// shell (robust to anisotropic spectra) over shells between the first one
/// below 10% of the peak and the 1e-14 amplitude floor.
inline GevreyEstimate estimate_gevrey_radius(const SpectralField& f, double s) {
    constexpr double kFloor = 1e-14;

    const int max_shell = f.grid.n / 2 + (f.grid.dim - 1) * f.grid.n;  // generous bound
    std::vector<double> shell_amp(max_shell + 1, 0.0);
    std::vector<double> shell_kabs(max_shell + 1, 0.0);

    const std::size_t size = f.grid.size();
    for (std::size_t i = 0; i < size; ++i) {
        auto k = f.grid.wavevector(i);
        std::int64_t kk = f.grid.k_squared(k);
        if (kk == 0) continue;
        double amp = std::abs(f.coeffs[i]);
        if (amp == 0.0) continue;
        double kabs = std::sqrt(static_cast<double>(kk));
        int shell = static_cast<int>(std::ceil(kabs - 1e-9));
        if (amp > shell_amp[shell]) {
            shell_amp[shell] = amp;
            shell_kabs[shell] = kabs;
        }
    }

    double peak = 0.0;
    int nonempty = 0;
    for (int r = 1; r <= max_shell; ++r) {
        if (shell_amp[r] >= kFloor) ++nonempty;
        peak = std::max(peak, shell_amp[r]);
    }
    if (nonempty < 6)
        throw InsufficientDecay("only " + std::to_string(nonempty) +
                                " shells above the 1e-14 amplitude floor (need 6)");

    std::vector<double> x, y;
    GevreyEstimate est;
    est.s = s;
    bool past_knee = false;
    for (int r = 1; r <= max_shell; ++r) {
        if (shell_amp[r] == 0.0) continue;
        if (!past_knee && shell_amp[r] <= 0.1 * peak) past_knee = true;
        if (!past_knee) continue;
        if (shell_amp[r] < kFloor) break;
        x.push_back(-std::pow(shell_kabs[r], 1.0 / s));
        y.push_back(std::log(shell_amp[r]));
        if (est.shell_min == 0) est.shell_min = r;
        est.shell_max = r;
    }
    if (x.size() < 4)
        throw InsufficientDecay("only " + std::to_string(x.size()) +
                                " usable shells between the 10%-of-peak knee and the "
                                "amplitude floor (need 4)");

    auto fit = fit_linear(x, y);
    est.tau_hat = std::max(fit.slope, 0.0);
    est.fit_residual = fit.rms_residual;
    est.shells_used = static_cast<int>(x.size());
    return est;
}

}  // namespace asl
