#pragma once

#include <stdexcept>
#include <string>

namespace evo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input: bad config keys, dimension mismatches, invalid parameters.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A mathematical hypothesis required by the solver does not hold
/// (non-hyperbolic rates, coefficient bound violations, degenerate measures,
/// contraction condition violated).
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

/// An iterative or truncated process failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double achieved = 0.0)
        : Error(msg), achieved_bound(achieved) {}
    double achieved_bound;
};

/// A signal produced a non-finite value.
class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& msg) : Error(msg) {}
};

}  // namespace evo
