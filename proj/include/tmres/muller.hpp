// muller.hpp — Muller's method for complex roots of scaled-valued functions.
#pragma once

#include <functional>

#include "tmres/types.hpp"

namespace tmres {

struct MullerOptions {
  int max_iterations = 50;
  /// Accept when |step| < step_tolerance * max(|omega|, scale).
  double step_tolerance = 1e-12;
  double scale = 1.0;
};

struct MullerResult {
  Complex root{0.0, 0.0};
  bool converged = false;
  int iterations = 0;
  double last_step = 0.0;
};

/// Quadratic-interpolation root iteration on f. The function returns values
/// in mantissa/2^e form so that determinants spanning hundreds of binary
/// orders of magnitude can be iterated on directly; per iteration all three
/// values are brought to a common exponent before the divided differences.
MullerResult muller_find_root(const std::function<ScaledComplex(Complex)>& f, Complex seed0,
                              Complex seed1, Complex seed2, const MullerOptions& opts = {});

}  // namespace tmres
