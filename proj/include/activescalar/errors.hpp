#pragma once

#include <stdexcept>
#include <string>

namespace asl {

// Bad user input: grid sizes, physics parameters, malformed config files.
// CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class OddResolution : public ConfigError {
public:
    explicit OddResolution(int n)
        : ConfigError("resolution must be even and >= 8, got n=" + std::to_string(n)) {}
};

class BadDimension : public ConfigError {
public:
    explicit BadDimension(int d)
        : ConfigError("spatial dimension must be 2 or 3, got d=" + std::to_string(d)) {}
};

class GammaOutOfRange : public ConfigError {
public:
    explicit GammaOutOfRange(double gamma)
        : ConfigError("gamma must lie in (0,2], got gamma=" + std::to_string(gamma)) {}
};

class ShapeMismatch : public std::runtime_error {
public:
    explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Trajectory diverged: H^1 norm above threshold or NaN in the state.
// CLI maps this to exit code 3.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, long step, const std::string& what)
        : std::runtime_error(what), t(t), step(step) {}
    double t;
    long step;
};

// Spectrum has too few decaying shells to fit an analyticity radius.
class InsufficientDecay : public std::runtime_error {
public:
    explicit InsufficientDecay(const std::string& what) : std::runtime_error(what) {}
};

// Checkpoint file problems.
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asl
