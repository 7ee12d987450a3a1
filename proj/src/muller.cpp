#include "tmres/muller.hpp"

#include <algorithm>
#include <cmath>

#include "tmres/errors.hpp"

namespace tmres {

namespace {

// Brings the three values to the largest of their exponents. Values hundreds
// of binary orders below the reference underflow to zero, which is the
// correct relative weight.
void to_common_scale(const ScaledComplex& f0, const ScaledComplex& f1, const ScaledComplex& f2,
                     Complex& v0, Complex& v1, Complex& v2) {
  const long ref = std::max({f0.exponent, f1.exponent, f2.exponent});
  v0 = f0.value_scaled_by(ref);
  v1 = f1.value_scaled_by(ref);
  v2 = f2.value_scaled_by(ref);
}

}  // namespace

MullerResult muller_find_root(const std::function<ScaledComplex(Complex)>& f, Complex seed0,
                              Complex seed1, Complex seed2, const MullerOptions& opts) {
  Complex x0 = seed0, x1 = seed1, x2 = seed2;
  ScaledComplex f0 = f(x0), f1 = f(x1), f2 = f(x2);

  MullerResult result;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    result.iterations = iter + 1;
    Complex v0, v1, v2;
    to_common_scale(f0, f1, f2, v0, v1, v2);
    if (v2 == Complex{0.0, 0.0}) {  // landed exactly on a root
      result.root = x2;
      result.converged = true;
      result.last_step = 0.0;
      return result;
    }

    const Complex d21 = (v1 - v2) / (x1 - x2);
    const Complex d20 = (v0 - v2) / (x0 - x2);
    const Complex d10 = (v0 - v1) / (x0 - x1);
    const Complex w = d21 + d20 - d10;
    const Complex curvature = (d10 - d21) / (x0 - x2);
    if (w == Complex{0.0, 0.0} && curvature == Complex{0.0, 0.0}) {
      break;  // flat interpolant; no step available
    }

    Complex disc = std::sqrt(w * w - 4.0 * v2 * curvature);
    if (std::abs(w - disc) > std::abs(w + disc)) disc = -disc;
    const Complex step = -2.0 * v2 / (w + disc);
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;

    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 += step;
    f2 = f(x2);

    result.root = x2;
    result.last_step = std::abs(step);
    if (result.last_step < opts.step_tolerance * std::max(std::abs(x2), opts.scale)) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace tmres
