#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tmres/errors.hpp"
#include "tmres/modulation.hpp"

using namespace tmres;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("modulation") {

TEST_CASE("cosine fourier coefficients") {
  SUBCASE("static limit") {
    const auto table = fourier_coefficients(0.0, 1.3);
    CHECK(table.size() == 1);
    CHECK(table.at(0) == Complex{1.0, 0.0});
  }
  SUBCASE("zero phase") {
    const auto table = fourier_coefficients(0.6, 0.0);
    CHECK(table.at(1).real() == doctest::Approx(0.3));
    CHECK(table.at(1).imag() == doctest::Approx(0.0));
    CHECK(table.at(-1).real() == doctest::Approx(0.3));
    CHECK(table.at(0) == Complex{1.0, 0.0});
  }
  SUBCASE("quarter phase") {
    const auto table = fourier_coefficients(0.9, kPi / 2);
    CHECK(table.at(1).real() == doctest::Approx(0.0));
    CHECK(table.at(1).imag() == doctest::Approx(-0.45));
    CHECK(table.at(-1).real() == doctest::Approx(0.0));
    CHECK(table.at(-1).imag() == doctest::Approx(0.45));
  }
  CHECK_THROWS_AS(fourier_coefficients(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(fourier_coefficients(-0.1, 0.0), ConfigError);
}

TEST_CASE("time-domain evaluation") {
  const double omega = 0.03;
  const ModulationProfile profile =
      ModulationProfile::cosine(omega, {{0.0, 0.7}, {0.5, 0.0}});

  CHECK(profile.kappa(0, 0.37) == doctest::Approx(1.0));
  CHECK(profile.kappa(1, 0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(profile.inv_kappa_dt(0, 12.3) == doctest::Approx(0.0));
  const double quarter = profile.period() / 4.0;
  CHECK(profile.inv_kappa_dt(1, quarter) == doctest::Approx(-0.5 * omega));
}

TEST_CASE("fourier synthesis matches the time domain") {
  const ModulationProfile profile =
      ModulationProfile::cosine(0.03, {{0.9, 1.1}, {0.3, 4.0}, {0.0, 0.0}});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (int s = 0; s < 64; ++s) {
      const double t = profile.period() * s / 64.0;
      Complex sum{0.0, 0.0};
      for (int m = -profile.order(); m <= profile.order(); ++m) {
        sum += profile.fourier_coeff(i, m) * std::exp(Complex{0.0, -m * profile.omega() * t});
      }
      CHECK(std::abs(sum.imag()) < 1e-12);
      CHECK(sum.real() == doctest::Approx(profile.inv_kappa(i, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic derivative matches central differences") {
  const ModulationProfile profile = ModulationProfile::cosine(0.03, {{0.8, 2.1}});
  const double h = profile.period() / 1e6;
  for (double t : {0.0, 13.7, 150.0, 200.1}) {
    const double numeric = (profile.inv_kappa(0, t + h) - profile.inv_kappa(0, t - h)) / (2 * h);
    const double analytic = profile.inv_kappa_dt(0, t);
    CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("mean of kappa over one period") {
  // (1/T) int kappa dt = 1 / sqrt(1 - eps^2) for the cosine family.
  for (double eps : {0.0, 0.3, 0.6, 0.9}) {
    const ModulationProfile profile = ModulationProfile::cosine(0.03, {{eps, 0.9}});
    const int n = 1024;
    double mean = 0.0;
    for (int s = 0; s < n; ++s) {
      mean += profile.kappa(0, profile.period() * s / n);
    }
    mean /= n;
    CHECK(mean == doctest::Approx(1.0 / std::sqrt(1.0 - eps * eps)).epsilon(1e-9));
  }
}

TEST_CASE("periodicity of the derivative integral") {
  const ModulationProfile profile = ModulationProfile::cosine(0.03, {{0.6, 0.4}});
  const int n = 4096;
  double integral = 0.0;
  for (int s = 0; s < n; ++s) {
    integral += profile.inv_kappa_dt(0, profile.period() * s / n);
  }
  integral *= profile.period() / n;
  CHECK(std::abs(integral) < 1e-12);
}

TEST_CASE("direct coefficient tables") {
  // Same profile as the cosine family, entered by its coefficients.
  const double eps = 0.4, phi = 0.7;
  const std::vector<Complex> table = {0.5 * eps * std::exp(Complex{0.0, phi}), Complex{1.0, 0.0},
                                      0.5 * eps * std::exp(Complex{0.0, -phi})};
  const ModulationProfile direct = ModulationProfile::from_fourier(0.03, {table});
  const ModulationProfile cosine = ModulationProfile::cosine(0.03, {{eps, phi}});
  for (double t : {0.0, 50.0, 111.1}) {
    CHECK(direct.inv_kappa(0, t) == doctest::Approx(cosine.inv_kappa(0, t)).epsilon(1e-13));
    CHECK(direct.inv_kappa_dt(0, t) == doctest::Approx(cosine.inv_kappa_dt(0, t)).epsilon(1e-12));
  }

  // Reality violation.
  CHECK_THROWS_AS(
      ModulationProfile::from_fourier(0.03, {{Complex{0.2, 0.0}, Complex{1.0, 0.0}, Complex{0.3, 0.0}}}),
      ConfigError);
  // 1/kappa loses positivity.
  CHECK_THROWS_AS(
      ModulationProfile::from_fourier(0.03, {{Complex{0.6, 0.0}, Complex{1.0, 0.0}, Complex{0.6, 0.0}}}),
      ConfigError);
}

}  // TEST_SUITE
