// modulation.hpp — time-periodic bulk-modulus modulation inside the resonators.
#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "tmres/types.hpp"

namespace tmres {

/// Fourier table of 1/kappa for one cosine-modulated resonator, with the
/// convention 1/kappa(t) = sum_m c_m e^{-i m W t}:
///   c_0 = 1, c_{-1} = (eps/2) e^{+i phi}, c_{+1} = (eps/2) e^{-i phi},
/// all other coefficients zero. Requires 0 <= eps < 1.
std::map<int, Complex> fourier_coefficients(double eps, double phi);

/// Per-resonator modulation kappa_i(t), T-periodic with period 2 pi / omega.
/// The canonical representation is the Fourier table of 1/kappa_i; the
/// cosine family kappa_i(t) = 1 / (1 + eps_i cos(omega t + phi_i)) is the
/// built-in special case with exact time-domain evaluation.
/// Immutable after construction.
class ModulationProfile {
 public:
  struct CosineEntry {
    double eps = 0.0;  // amplitude in [0, 1)
    double phi = 0.0;  // phase, normalized into [0, 2 pi)
  };

  static ModulationProfile cosine(double omega_mod, std::vector<CosineEntry> entries);

  /// Arbitrary trigonometric-polynomial profiles of 1/kappa: one coefficient
  /// table per resonator, laid out m = -order .. order. Tables must satisfy
  /// c_{-m} = conj(c_m) and keep 1/kappa(t) strictly positive.
  static ModulationProfile from_fourier(double omega_mod,
                                        std::vector<std::vector<Complex>> tables);

  double omega() const { return omega_mod_; }
  double period() const { return period_; }
  std::size_t size() const { return n_; }
  int order() const { return order_; }
  bool is_cosine() const { return cosine_; }
  const std::vector<CosineEntry>& entries() const { return entries_; }

  /// Fourier coefficient c_{i,m} of 1/kappa_i; zero outside the band.
  Complex fourier_coeff(std::size_t i, int m) const;

  double kappa(std::size_t i, double t) const;
  double inv_kappa(std::size_t i, double t) const;
  /// d/dt of 1/kappa_i(t); analytic (-eps omega sin(omega t + phi)) for the
  /// cosine family.
  double inv_kappa_dt(std::size_t i, double t) const;

  bool is_static() const;

 private:
  ModulationProfile() = default;

  double omega_mod_ = 0.0;
  double period_ = 0.0;
  std::size_t n_ = 0;
  int order_ = 0;
  bool cosine_ = false;
  std::vector<CosineEntry> entries_;            // empty unless cosine
  std::vector<std::vector<Complex>> fourier_;   // [resonator][m + order]
};

}  // namespace tmres
