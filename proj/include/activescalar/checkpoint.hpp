#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "activescalar/constitutive.hpp"
#include "activescalar/evolution.hpp"

namespace asl {

// Binary checkpoint: magic "ASLB1", fixed-width little-endian header, raw
// float64 coefficient payload (re, im pairs), optional AB2 history payload.
// Round trip is bit-exact.
namespace detail {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw CheckpointError(std::string("truncated checkpoint while reading ") + what);
    return v;
}

inline void write_coeffs(std::ostream& os, const SpectralField& f) {
    os.write(reinterpret_cast<const char*>(f.coeffs.data()),
             static_cast<std::streamsize>(f.coeffs.size() * sizeof(std::complex<double>)));
}

inline void read_coeffs(std::istream& is, SpectralField& f) {
    is.read(reinterpret_cast<char*>(f.coeffs.data()),
            static_cast<std::streamsize>(f.coeffs.size() * sizeof(std::complex<double>)));
    if (!is) throw CheckpointError("truncated checkpoint payload");
}

}  // namespace detail

inline constexpr char kCheckpointMagic[5] = {'A', 'S', 'L', 'B', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
    int dim = 0;
    int n = 0;
    LawKind law = LawKind::SQG;
    double nu = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
};

inline void save_checkpoint(const StepState& state, const SolverConfig& config,
                            const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw CheckpointError("cannot open '" + path + "' for writing");
    os.write(kCheckpointMagic, 5);
    detail::write_pod(os, kCheckpointVersion);
    detail::write_pod(os, static_cast<std::uint32_t>(config.dim));
    detail::write_pod(os, static_cast<std::uint32_t>(config.n));
    detail::write_pod(os, static_cast<std::uint32_t>(config.law.kind));
    detail::write_pod(os, config.law.nu);
    detail::write_pod(os, config.kappa);
    detail::write_pod(os, config.gamma);
    detail::write_pod(os, state.t);
    detail::write_pod(os, static_cast<std::int64_t>(state.step));
    detail::write_pod(os, state.diss_integral);
    detail::write_pod(os, state.force_integral);
    detail::write_pod(os, state.energy0);
    detail::write_pod(os, state.max_half_l2sq);
    detail::write_pod(os, static_cast<std::uint8_t>(state.prev_rhs ? 1 : 0));
    detail::write_coeffs(os, state.theta);
    if (state.prev_rhs) detail::write_coeffs(os, *state.prev_rhs);
    if (!os) throw CheckpointError("write failure on '" + path + "'");
}

inline StepState load_checkpoint(const std::string& path, CheckpointHeader* header = nullptr) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open '" + path + "'");
    char magic[5];
    is.read(magic, 5);
    if (!is || std::memcmp(magic, kCheckpointMagic, 5) != 0)
        throw CheckpointError("bad magic in '" + path + "' (not an ASLB1 checkpoint)");
    auto version = detail::read_pod<std::uint32_t>(is, "version");
    if (version != kCheckpointVersion)
        throw CheckpointError("checkpoint version " + std::to_string(version) +
                              " unsupported (expected " + std::to_string(kCheckpointVersion) +
                              ")");
    CheckpointHeader h;
    h.dim = static_cast<int>(detail::read_pod<std::uint32_t>(is, "dim"));
    h.n = static_cast<int>(detail::read_pod<std::uint32_t>(is, "n"));
    h.law = static_cast<LawKind>(detail::read_pod<std::uint32_t>(is, "law"));
    h.nu = detail::read_pod<double>(is, "nu");
    h.kappa = detail::read_pod<double>(is, "kappa");
    h.gamma = detail::read_pod<double>(is, "gamma");

    StepState state;
    state.t = detail::read_pod<double>(is, "t");
    state.step = detail::read_pod<std::int64_t>(is, "step");
    state.diss_integral = detail::read_pod<double>(is, "diss_integral");
    state.force_integral = detail::read_pod<double>(is, "force_integral");
    state.energy0 = detail::read_pod<double>(is, "energy0");
    state.max_half_l2sq = detail::read_pod<double>(is, "max_half_l2sq");
    auto has_prev = detail::read_pod<std::uint8_t>(is, "ab2 flag");

    Grid grid = make_grid(h.dim, h.n);
    state.theta = SpectralField(grid);
    detail::read_coeffs(is, state.theta);
    if (has_prev) {
        state.prev_rhs = SpectralField(grid);
        detail::read_coeffs(is, *state.prev_rhs);
    }
    if (header) *header = h;
    return state;
}

}  // namespace asl
