// types.hpp — shared scalar types and small numeric helpers.
#pragma once

#include <cmath>
#include <complex>

namespace tmres {

using Complex = std::complex<double>;

inline constexpr Complex kImagUnit{0.0, 1.0};

/// Folds the real part of a quasifrequency into the fundamental domain
/// [-omega_mod/2, omega_mod/2). The imaginary part is untouched.
inline Complex fold_to_brillouin(Complex omega, double omega_mod) {
  double re = omega.real();
  double folded = re - omega_mod * std::floor(re / omega_mod + 0.5);
  if (folded >= omega_mod / 2) folded -= omega_mod;
  return {folded, omega.imag()};
}

/// Complex value carried as mantissa * 2^exponent. Used for determinants
/// whose raw magnitude would under- or overflow a double.
struct ScaledComplex {
  Complex mantissa{0.0, 0.0};
  long exponent = 0;

  ScaledComplex() = default;
  explicit ScaledComplex(Complex m, long e = 0) : mantissa(m), exponent(e) { normalize(); }

  void normalize() {
    const double mag = std::max(std::abs(mantissa.real()), std::abs(mantissa.imag()));
    if (mag == 0.0 || !std::isfinite(mag)) {
      exponent = 0;
      return;
    }
    int e = 0;
    std::frexp(mag, &e);
    mantissa = {std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
    exponent += e;
  }

  ScaledComplex& operator*=(Complex factor) {
    mantissa *= factor;
    normalize();
    return *this;
  }

  bool is_zero() const { return mantissa == Complex{0.0, 0.0}; }
  bool is_finite() const {
    return std::isfinite(mantissa.real()) && std::isfinite(mantissa.imag());
  }

  /// Plain complex value after dividing by 2^ref_exponent. Exact as long as
  /// the shifted exponent stays inside double range; underflows to zero
  /// otherwise, which is the desired behaviour when comparing against a
  /// much larger reference value.
  Complex value_scaled_by(long ref_exponent) const {
    const int shift = static_cast<int>(exponent - ref_exponent);
    return {std::ldexp(mantissa.real(), shift), std::ldexp(mantissa.imag(), shift)};
  }
};

}  // namespace tmres
