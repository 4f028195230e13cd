#pragma once

#include <stdexcept>
#include <string>

namespace lcgeom {

/// Base class for all library errors. CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid parameters at construction time (non-SPD matrix, p <= 1, ...).
class ParameterError : public Error { using Error::Error; };

/// Evaluation outside the admissible domain of a function or body.
class DomainError : public Error { using Error::Error; };

/// Tabulated-grid problems: too few points, non-convex data, dual range
/// not representable, query outside the grid.
class GridError : public Error { using Error::Error; };

/// Quadrature failure: divergent estimate, too many singular nodes,
/// refinement target unreachable.
class NumericalError : public Error { using Error::Error; };

/// A checker precondition on the divergence generator fails
/// (convexity/shape mismatch, Gilardoni condition violated, f(1) != 0).
class ConditionError : public Error { using Error::Error; };

/// Rejection sampling acceptance rate collapsed.
class SamplingError : public Error { using Error::Error; };

/// Iterative solver residual grew without recovery.
class DivergenceError : public Error { using Error::Error; };

/// Malformed scenario/config input.
class ConfigError : public Error { using Error::Error; };

} // namespace lcgeom
