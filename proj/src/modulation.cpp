#include "tmres/modulation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tmres/errors.hpp"

namespace tmres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_phase(double phi) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  return p;
}

void check_eps(double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0)) {
    std::ostringstream msg;
    msg << "modulation: amplitude must lie in [0, 1), got " << eps;
    throw ConfigError(msg.str());
  }
}

}  // namespace

std::map<int, Complex> fourier_coefficients(double eps, double phi) {
  check_eps(eps);
  std::map<int, Complex> coeffs;
  coeffs[0] = Complex{1.0, 0.0};
  if (eps > 0.0) {
    coeffs[-1] = 0.5 * eps * std::exp(Complex{0.0, phi});
    coeffs[1] = 0.5 * eps * std::exp(Complex{0.0, -phi});
  }
  return coeffs;
}

ModulationProfile ModulationProfile::cosine(double omega_mod,
                                            std::vector<CosineEntry> entries) {
  if (!(omega_mod > 0.0)) throw ConfigError("modulation: omega must be positive");
  if (entries.empty()) throw ConfigError("modulation: need at least one entry");

  ModulationProfile p;
  p.omega_mod_ = omega_mod;
  p.period_ = kTwoPi / omega_mod;
  p.n_ = entries.size();
  p.cosine_ = true;
  bool any_modulated = false;
  for (auto& e : entries) {
    check_eps(e.eps);
    e.phi = normalize_phase(e.phi);
    any_modulated |= e.eps > 0.0;
  }
  p.order_ = any_modulated ? 1 : 0;
  p.entries_ = std::move(entries);
  p.fourier_.resize(p.n_);
  for (std::size_t i = 0; i < p.n_; ++i) {
    auto table = fourier_coefficients(p.entries_[i].eps, p.entries_[i].phi);
    p.fourier_[i].assign(2 * p.order_ + 1, Complex{0.0, 0.0});
    for (int m = -p.order_; m <= p.order_; ++m) {
      auto it = table.find(m);
      if (it != table.end()) p.fourier_[i][m + p.order_] = it->second;
    }
  }
  return p;
}

ModulationProfile ModulationProfile::from_fourier(double omega_mod,
                                                  std::vector<std::vector<Complex>> tables) {
  if (!(omega_mod > 0.0)) throw ConfigError("modulation: omega must be positive");
  if (tables.empty()) throw ConfigError("modulation: need at least one entry");
  const std::size_t width = tables.front().size();
  if (width % 2 != 1) throw ConfigError("modulation: coefficient tables must have odd length");
  for (const auto& t : tables) {
    if (t.size() != width) throw ConfigError("modulation: ragged coefficient tables");
  }

  ModulationProfile p;
  p.omega_mod_ = omega_mod;
  p.period_ = kTwoPi / omega_mod;
  p.n_ = tables.size();
  p.cosine_ = false;
  p.order_ = static_cast<int>(width / 2);
  p.fourier_ = std::move(tables);

  // Reality and positivity of 1/kappa on a fine period grid.
  for (std::size_t i = 0; i < p.n_; ++i) {
    for (int m = 1; m <= p.order_; ++m) {
      const Complex a = p.fourier_coeff(i, m);
      const Complex b = p.fourier_coeff(i, -m);
      if (std::abs(b - std::conj(a)) > 1e-12 * (1.0 + std::abs(a))) {
        throw ConfigError("modulation: table violates c_{-m} = conj(c_m) for resonator " +
                          std::to_string(i + 1));
      }
    }
    if (std::abs(p.fourier_coeff(i, 0).imag()) > 1e-12) {
      throw ConfigError("modulation: mean coefficient must be real");
    }
    constexpr int kSamples = 4096;
    for (int s = 0; s < kSamples; ++s) {
      const double t = p.period_ * s / kSamples;
      if (!(p.inv_kappa(i, t) > 0.0)) {
        throw ConfigError("modulation: 1/kappa is not strictly positive for resonator " +
                          std::to_string(i + 1));
      }
    }
  }
  return p;
}

Complex ModulationProfile::fourier_coeff(std::size_t i, int m) const {
  if (m < -order_ || m > order_) return {0.0, 0.0};
  return fourier_[i][m + order_];
}

double ModulationProfile::inv_kappa(std::size_t i, double t) const {
  if (cosine_) {
    const auto& e = entries_[i];
    return 1.0 + e.eps * std::cos(omega_mod_ * t + e.phi);
  }
  Complex sum{0.0, 0.0};
  for (int m = -order_; m <= order_; ++m) {
    sum += fourier_[i][m + order_] * std::exp(Complex{0.0, -m * omega_mod_ * t});
  }
  return sum.real();
}

double ModulationProfile::kappa(std::size_t i, double t) const {
  return 1.0 / inv_kappa(i, t);
}

double ModulationProfile::inv_kappa_dt(std::size_t i, double t) const {
  if (cosine_) {
    const auto& e = entries_[i];
    return -e.eps * omega_mod_ * std::sin(omega_mod_ * t + e.phi);
  }
  Complex sum{0.0, 0.0};
  for (int m = -order_; m <= order_; ++m) {
    sum += Complex{0.0, -m * omega_mod_} * fourier_[i][m + order_] *
           std::exp(Complex{0.0, -m * omega_mod_ * t});
  }
  return sum.real();
}

bool ModulationProfile::is_static() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (int m = 1; m <= order_; ++m) {
      if (fourier_coeff(i, m) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

}  // namespace tmres
