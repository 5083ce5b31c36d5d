#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace psh {

using Complex = std::complex<double>;

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

/// Invalid argument to an operation (non-positive radius, dimension mismatch, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's precondition on the evaluated function does not hold,
/// e.g. an operator requested at a point where u = -inf.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation produced something outside [-inf, inf): NaN, +inf,
/// division by zero, or -inf * 0.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The finite-difference oracle cannot be applied (stencil touched -inf).
class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent run configuration (domain fit, unknown check, bad grid spec).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace psh
