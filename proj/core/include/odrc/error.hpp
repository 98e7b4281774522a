#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odrc {

/// Invalid experiment or component configuration (bad band, unknown key, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller passed arguments that violate an operation's preconditions.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values reached a numerical routine.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A randomized construction could not satisfy its acceptance test.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& what, std::size_t attempts)
        : std::runtime_error(what), attempts_(attempts) {}

    std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

/// Target generation produced unusable data (e.g. spectral blow-up).
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalization of an all-zero or non-finite series.
class NormalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lyapunov estimation could not find enough neighbours.
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& what, double failing_fraction)
        : std::runtime_error(what), failing_fraction_(failing_fraction) {}

    double failing_fraction() const noexcept { return failing_fraction_; }

private:
    double failing_fraction_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace odrc
