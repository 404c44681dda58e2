#pragma once

#include <stdexcept>
#include <string>

namespace fhawkes {

/// Model has spectral radius rho(nu) >= 1; no stationary version exists.
struct NonstationaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Event budget or recursion depth guard tripped during simulation.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration (unknown family, malformed preset, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter vector that cannot be mapped to a valid spectral family.
struct InvalidThetaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Objective could not be evaluated (non-positive-definite spectrum, ...).
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical routine failed to converge (quadrature, bootstrap, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Event file could not be parsed; carries the offending line number.
struct EventParseError : std::runtime_error {
    long line;
    EventParseError(const std::string& msg, long l) : std::runtime_error(msg), line(l) {}
};

/// Data unusable for the requested statistic (degenerate mark, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fhawkes
