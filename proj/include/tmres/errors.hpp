// errors.hpp — exception hierarchy.
#pragma once

#include <stdexcept>

namespace tmres {

/// Invalid or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of the numerical machinery (singular systems, stalled
/// iterations, eigensolver breakdown).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sin(k l) vanished on a gap while |k l| was not small: the gap propagator
/// is genuinely singular at this frequency.
class GapSingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The block linear system is singular or numerically singular, which
/// signals an operating frequency at or next to a resonance.
class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegeneratePoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tmres
