#include "tmres/quasifreq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "tmres/errors.hpp"
#include "tmres/muller.hpp"
#include "tmres/scattering.hpp"

namespace tmres {

const char* method_name(QuasifreqMethod m) {
  switch (m) {
    case QuasifreqMethod::kFloquet: return "floquet";
    case QuasifreqMethod::kClosedForm: return "closed_form";
    case QuasifreqMethod::kDetRoot: return "det_root";
  }
  return "unknown";
}

CapacitanceMatrix capacitance_matrix(const ResonatorArray& array) {
  const std::size_t n = array.size();
  CapacitanceMatrix c;
  c.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double inv = 1.0 / array.gap(i - 1);
      c.entries(i, i) += inv;
      c.entries(i, i - 1) = -inv;
    }
    if (i + 1 < n) {
      const double inv = 1.0 / array.gap(i);
      c.entries(i, i) += inv;
      c.entries(i, i + 1) = -inv;
    }
  }
  return c;
}

namespace {

// Dirichlet solve of -V'' = 0 on one gap, discretized with the standard
// second-order three-point stencil and solved by the Thomas algorithm.
// Returns the grid values including both endpoints.
std::vector<double> gap_profile(double value_left, double value_right, std::size_t cells) {
  const std::size_t interior = cells - 1;
  std::vector<double> v(cells + 1);
  v.front() = value_left;
  v.back() = value_right;
  if (interior == 0) return v;

  std::vector<double> diag(interior, 2.0), rhs(interior, 0.0);
  rhs.front() += value_left;
  rhs.back() += value_right;
  // Forward sweep with unit off-diagonals (-1).
  for (std::size_t k = 1; k < interior; ++k) {
    const double w = -1.0 / diag[k - 1];
    diag[k] -= -1.0 * w;
    rhs[k] -= rhs[k - 1] * w;
  }
  v[interior] = rhs[interior - 1] / diag[interior - 1];
  for (std::size_t k = interior - 1; k-- > 0;) {
    v[k + 1] = (rhs[k] + v[k + 2]) / diag[k];
  }
  return v;
}

// One-sided three-point derivative estimates at the two ends of a grid.
double left_end_slope(const std::vector<double>& v, double h) {
  return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
}
double right_end_slope(const std::vector<double>& v, double h) {
  const std::size_t m = v.size() - 1;
  return (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
}

}  // namespace

CapacitanceMatrix capacitance_oracle(const ResonatorArray& array, double h) {
  const std::size_t n = array.size();
  if (!(h > 0.0)) throw NumericalError("capacitance oracle: step must be positive");

  CapacitanceMatrix c;
  c.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  // The profile of source j is delta_ij on resonator i and constant on the
  // half-lines, so its flux jump at resonator i only sees the two adjacent
  // gap solves.
  for (std::size_t g = 0; g + 1 < n; ++g) {
    const double len = array.gap(g);
    const auto cells = static_cast<std::size_t>(std::llround(len / h));
    if (cells < 10) {
      std::ostringstream msg;
      msg << "capacitance oracle: grid too coarse, gap " << g + 1 << " has " << cells
          << " cells (need >= 10)";
      throw NumericalError(msg.str());
    }
    const double step = len / static_cast<double>(cells);
    for (std::size_t j = 0; j < n; ++j) {
      const double bc_left = (j == g) ? 1.0 : 0.0;
      const double bc_right = (j == g + 1) ? 1.0 : 0.0;
      if (bc_left == 0.0 && bc_right == 0.0) continue;
      const std::vector<double> profile = gap_profile(bc_left, bc_right, cells);
      // d/dx on the left of x_{g+1}^- contributes +, on the right of x_g^+
      // contributes - to the flux functional.
      c.entries(static_cast<Eigen::Index>(g + 1), static_cast<Eigen::Index>(j)) +=
          right_end_slope(profile, step);
      c.entries(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j)) -=
          left_end_slope(profile, step);
    }
  }
  return c;
}

Eigen::MatrixXd monodromy_matrix(const SimulationConfig& cfg) {
  namespace ode = boost::numeric::odeint;
  const auto n = static_cast<Eigen::Index>(cfg.resonator_count());
  const Eigen::Index dim = 2 * n;

  const Eigen::MatrixXd cap = capacitance_matrix(cfg.array).entries;
  Eigen::VectorXd inv_length(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_length(i) = 1.0 / cfg.array.length(static_cast<std::size_t>(i));
  }
  Eigen::VectorXd edge_weight = Eigen::VectorXd::Zero(n);
  if (n == 1) {
    edge_weight(0) = 2.0;
  } else {
    edge_weight(0) = 1.0;
    edge_weight(n - 1) = 1.0;
  }
  const double coupling = cfg.physical.delta * cfg.physical.v_in * cfg.physical.v_in;
  const double v_out = cfg.physical.v_out;
  const auto& mod = cfg.modulation;

  // y = (c, c'); c'' = -kappa(t) [ coupling L^-1 (C c + D c'/v_out) + (1/kappa)' c' ].
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dydt, double t) {
    dydt.resize(dim * dim);
    Eigen::Map<const Eigen::MatrixXd> state(y.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXd> deriv(dydt.data(), dim, dim);
    const auto pos = state.topRows(n);
    const auto vel = state.bottomRows(n);
    deriv.topRows(n) = vel;
    Eigen::MatrixXd acc = cap * pos;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc.row(i) = -mod.kappa(static_cast<std::size_t>(i), t) *
                   (coupling * inv_length(i) * (acc.row(i) + edge_weight(i) / v_out * vel.row(i)) +
                    mod.inv_kappa_dt(static_cast<std::size_t>(i), t) * vel.row(i));
    }
    deriv.bottomRows(n) = acc;
  };

  Eigen::VectorXd flat = Eigen::VectorXd::Zero(dim * dim);
  Eigen::Map<Eigen::MatrixXd>(flat.data(), dim, dim).setIdentity();

  using Stepper = ode::runge_kutta_fehlberg78<Eigen::VectorXd, double, Eigen::VectorXd, double,
                                              ode::vector_space_algebra>;
  auto controlled = ode::make_controlled(1e-14, 1e-12, Stepper());
  try {
    ode::integrate_adaptive(controlled, rhs, flat, 0.0, cfg.modulation.period(),
                            cfg.modulation.period() / 1024.0);
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("monodromy integration failed: ") + e.what());
  }
  return Eigen::Map<Eigen::MatrixXd>(flat.data(), dim, dim);
}

QuasifrequencySet floquet_quasifrequencies(const SimulationConfig& cfg) {
  const Eigen::MatrixXd monodromy = monodromy_matrix(cfg);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(monodromy);
  if (solver.info() != Eigen::Success) {
    throw EigenSolveError("monodromy eigensolver failed");
  }
  const double period = cfg.modulation.period();
  const double omega_mod = cfg.modulation.omega();

  QuasifrequencySet out;
  out.method = QuasifreqMethod::kFloquet;
  const Eigen::Index dim = monodromy.rows();
  std::vector<std::pair<Complex, double>> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex multiplier = solver.eigenvalues()(j);
    const Complex omega = kImagUnit * std::log(multiplier) / period;
    const Eigen::VectorXcd v = solver.eigenvectors().col(j);
    const double residual = (monodromy.cast<Complex>() * v - multiplier * v).norm();
    entries.emplace_back(fold_to_brillouin(omega, omega_mod), residual);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  for (const auto& [omega, residual] : entries) {
    out.values.push_back(omega);
    out.residuals.push_back(residual);
  }
  return out;
}

Complex static_single_resonance(const PhysicalParams& p, double length) {
  const double v = p.v_in;
  return -kImagUnit * v / length *
         std::log(1.0 + 2.0 * v * p.delta / (p.v_out - v * p.delta));
}

QuasifrequencySet closed_form_single(const SimulationConfig& cfg) {
  if (cfg.resonator_count() != 1) {
    throw ConfigError("closed-form resonance requires a single resonator");
  }
  const double length = cfg.array.length(0);
  const Complex decay_constant =
      -2.0 * kImagUnit * cfg.physical.v_in * cfg.physical.v_in * cfg.physical.delta /
      (length * cfg.physical.v_out);

  Complex omega1;
  if (cfg.modulation.is_static()) {
    omega1 = static_single_resonance(cfg.physical, length);
  } else if (cfg.modulation.is_cosine()) {
    const double eps = cfg.modulation.entries()[0].eps;
    omega1 = decay_constant / std::sqrt(1.0 - eps * eps);
  } else {
    // Mean of kappa over one period, 1024-point trapezoid (periodic).
    constexpr int kPoints = 1024;
    double mean = 0.0;
    const double period = cfg.modulation.period();
    for (int s = 0; s < kPoints; ++s) {
      mean += cfg.modulation.kappa(0, period * s / kPoints);
    }
    mean /= kPoints;
    omega1 = decay_constant * mean;
  }

  QuasifrequencySet out;
  out.method = QuasifreqMethod::kClosedForm;
  out.values = {Complex{0.0, 0.0}, fold_to_brillouin(omega1, cfg.modulation.omega())};
  out.residuals = {0.0, 0.0};
  std::sort(out.values.begin(), out.values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

ScaledComplex scattering_determinant(const SimulationConfig& cfg, Complex omega) {
  const BlockSystem sys = assemble_system(cfg, omega);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
  ScaledComplex det(Complex{static_cast<double>(lu.permutationP().determinant()), 0.0});
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    det *= diag(i);
    if (det.is_zero() || !det.is_finite()) break;
  }
  return det;
}

namespace {

double singular_value_ratio(const SimulationConfig& cfg, Complex omega) {
  const BlockSystem sys = assemble_system(cfg, omega);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sys.matrix);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

}  // namespace

QuasifrequencySet det_root_quasifrequencies(const SimulationConfig& cfg,
                                            std::vector<Complex> seeds) {
  const double omega_mod = cfg.modulation.omega();
  const double delta = cfg.physical.delta;

  QuasifrequencySet out;
  out.method = QuasifreqMethod::kDetRoot;

  if (seeds.empty()) {
    const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
    const Complex offset = Complex{1.0, 1.0} * delta;
    for (Complex v : floquet.values) {
      seeds.push_back(v + offset);
      seeds.push_back(v - offset);
    }
  }
  if (seeds.empty()) throw ConfigError("det-root: need at least one seed");

  auto f = [&](Complex omega) -> ScaledComplex {
    ScaledComplex det = scattering_determinant(cfg, omega);
    // A factorization that hit an exact zero pivot away from a root is
    // retried with a jittered frequency.
    for (int attempt = 0; attempt < 3 && (det.is_zero() || !det.is_finite()); ++attempt) {
      const Complex jitter = Complex{1.0, 1.0} * (1e-12 * omega_mod * (attempt + 1));
      det = scattering_determinant(cfg, omega + jitter);
    }
    return det;
  };

  MullerOptions opts;
  opts.scale = omega_mod;
  std::vector<Complex> roots;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const Complex seed = seeds[s];
    const double spread = 1e-4 * std::max(std::abs(seed), omega_mod);
    const Complex d{spread, 0.5 * spread};
    MullerResult res;
    try {
      res = muller_find_root(f, seed + d, seed - d, seed, opts);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "seed " << s << " (" << seed.real() << ", " << seed.imag() << "): " << e.what();
      out.notes.push_back(msg.str());
      continue;
    }
    if (!res.converged) {
      std::ostringstream msg;
      msg << "seed " << s << " (" << seed.real() << ", " << seed.imag()
          << "): no convergence after " << res.iterations << " iterations, last step "
          << res.last_step;
      out.notes.push_back(msg.str());
      continue;
    }
    if (std::abs(res.root) > 2.0 * omega_mod) {
      std::ostringstream msg;
      msg << "seed " << s << ": root (" << res.root.real() << ", " << res.root.imag()
          << ") outside the subwavelength window, discarded";
      out.notes.push_back(msg.str());
      continue;
    }
    roots.push_back(fold_to_brillouin(res.root, omega_mod));
  }

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  constexpr double kDedupTol = 1e-10;
  for (Complex r : roots) {
    bool duplicate = false;
    for (Complex kept : out.values) {
      if (std::abs(kept - r) < kDedupTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      out.values.push_back(r);
      out.residuals.push_back(singular_value_ratio(cfg, r));
    }
  }
  return out;
}

}  // namespace tmres
