#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "activescalar/grid.hpp"

namespace asl {
namespace detail {

// Shared FFTW plan cache. Plans are created once per (dim, n, sign) with
// FFTW_ESTIMATE so results are reproducible run to run; fftw_execute_dft on
// distinct buffers is thread-safe, plan creation is serialized.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void execute(const Grid& g, int sign, std::complex<double>* in, std::complex<double>* out) {
        fftw_plan plan = get(g, sign);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }
    FftPlans(const FftPlans&) = delete;

    fftw_plan get(const Grid& g, int sign) {
        std::scoped_lock lock(mutex_);
        auto key = std::make_tuple(g.dim, g.n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<std::complex<double>> a(g.size()), b(g.size());
        auto* fa = reinterpret_cast<fftw_complex*>(a.data());
        auto* fb = reinterpret_cast<fftw_complex*>(b.data());
        fftw_plan plan = g.dim == 2
            ? fftw_plan_dft_2d(g.n, g.n, fa, fb, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
            : fftw_plan_dft_3d(g.n, g.n, g.n, fa, fb, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace detail
}  // namespace asl
