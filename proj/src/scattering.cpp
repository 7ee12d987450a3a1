#include "tmres/scattering.hpp"

#include <cmath>
#include <sstream>

#include "tmres/errors.hpp"

namespace tmres {

namespace {

constexpr double kZeroWavenumberBand = 1e-8;
constexpr double kGapSingularityTol = 1e-12;

// Incident one-sided traces (value, derivative) of temporal mode n at the two
// extreme boundary points; zero everywhere else on the chain.
struct IncidentTraces {
  Complex left_value{0.0, 0.0};
  Complex left_derivative{0.0, 0.0};
  Complex right_value{0.0, 0.0};
  Complex right_derivative{0.0, 0.0};
};

IncidentTraces incident_traces(const SimulationConfig& cfg, Complex omega, int n) {
  IncidentTraces tr;
  if (n != 0) return tr;  // the incident wave lives in mode 0
  const Complex k = omega / cfg.physical.v_out;
  const auto& inc = cfg.incident;
  if (inc.direction != IncidentDirection::kRight) {
    const double x = cfg.array.left(0);
    tr.left_value = inc.amplitude_left * std::exp(kImagUnit * k * x);
    tr.left_derivative = kImagUnit * k * tr.left_value;
  }
  if (inc.direction != IncidentDirection::kLeft) {
    const double x = cfg.array.right(cfg.array.size() - 1);
    tr.right_value = inc.amplitude_right * std::exp(-kImagUnit * k * x);
    tr.right_derivative = -kImagUnit * k * tr.right_value;
  }
  return tr;
}

}  // namespace

Eigen::Matrix2cd dtn_block(Complex k, double gap_length) {
  Eigen::Matrix2cd block;
  const Complex kl = k * gap_length;
  if (std::abs(kl) < kZeroWavenumberBand) {
    const double inv = 1.0 / gap_length;
    block << inv, -inv, inv, -inv;
    return block;
  }
  const Complex s = std::sin(kl);
  if (std::abs(s) < kGapSingularityTol) {
    std::ostringstream msg;
    msg << "gap propagator singular: sin(k l) = " << std::abs(s) << " for k = (" << k.real()
        << ", " << k.imag() << "), l = " << gap_length;
    throw GapSingularityError(msg.str());
  }
  const Complex c = std::cos(kl);
  block << k * c / s, -k / s, k / s, -k * c / s;
  return block;
}

BlockSystem assemble_system(const SimulationConfig& cfg, Complex omega,
                            const std::vector<InteriorBasis>& bases) {
  const std::size_t n_res = cfg.resonator_count();
  const int cutoff = cfg.truncation.mode_cutoff;
  const int dim_modes = 2 * cutoff + 1;
  const double delta = cfg.physical.delta;

  BlockSystem sys;
  sys.n_resonators = n_res;
  sys.mode_cutoff = cutoff;
  sys.omega = omega;
  const auto dim = static_cast<Eigen::Index>(2 * n_res * dim_modes);
  sys.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  sys.rhs = Eigen::VectorXcd::Zero(dim);

  // Interior value / derivative traces of mode n at x, added with a factor.
  auto add_value = [&](Eigen::Index row, std::size_t i, int n, double x, Complex factor) {
    const InteriorBasis& basis = bases[i];
    for (int j = -cutoff; j <= cutoff; ++j) {
      const InteriorMode& m = basis.mode(j);
      const Complex f = m.shape(n + cutoff);
      sys.matrix(row, sys.col(i, j, false)) += factor * std::exp(kImagUnit * m.wavenumber * x) * f;
      sys.matrix(row, sys.col(i, j, true)) += factor * std::exp(-kImagUnit * m.wavenumber * x) * f;
    }
  };
  auto add_derivative = [&](Eigen::Index row, std::size_t i, int n, double x, Complex factor) {
    const InteriorBasis& basis = bases[i];
    for (int j = -cutoff; j <= cutoff; ++j) {
      const InteriorMode& m = basis.mode(j);
      const Complex f = m.shape(n + cutoff);
      const Complex phase = kImagUnit * m.wavenumber * factor * f;
      sys.matrix(row, sys.col(i, j, false)) += phase * std::exp(kImagUnit * m.wavenumber * x);
      sys.matrix(row, sys.col(i, j, true)) -= phase * std::exp(-kImagUnit * m.wavenumber * x);
    }
  };

  for (int n = -cutoff; n <= cutoff; ++n) {
    const Complex k = wavenumbers(omega, n, cfg.modulation.omega(), cfg.physical).outside;
    const IncidentTraces inc = incident_traces(cfg, omega, n);

    for (std::size_t i = 0; i < n_res; ++i) {
      // Row at x_i^-: interior derivative equals delta times the exterior
      // derivative, the latter eliminated through the radiation condition or
      // the gap propagator acting on (interior - incident) traces.
      {
        const Eigen::Index r = sys.row(n, 2 * i);
        const double x = cfg.array.left(i);
        add_derivative(r, i, n, x, Complex{1.0, 0.0});
        if (i == 0) {
          add_value(r, i, n, x, delta * kImagUnit * k);
          sys.rhs(r) = delta * (inc.left_derivative + kImagUnit * k * inc.left_value);
        } else {
          // The derivative-trace map on a gap is the negated propagator.
          const Eigen::Matrix2cd prop = -dtn_block(k, cfg.array.gap(i - 1));
          add_value(r, i - 1, n, cfg.array.right(i - 1), -delta * prop(1, 0));
          add_value(r, i, n, x, -delta * prop(1, 1));
        }
      }
      // Row at x_i^+.
      {
        const Eigen::Index r = sys.row(n, 2 * i + 1);
        const double x = cfg.array.right(i);
        add_derivative(r, i, n, x, Complex{1.0, 0.0});
        if (i == n_res - 1) {
          add_value(r, i, n, x, -delta * kImagUnit * k);
          sys.rhs(r) = delta * (inc.right_derivative - kImagUnit * k * inc.right_value);
        } else {
          const Eigen::Matrix2cd prop = -dtn_block(k, cfg.array.gap(i));
          add_value(r, i, n, x, -delta * prop(0, 0));
          add_value(r, i + 1, n, cfg.array.left(i + 1), -delta * prop(0, 1));
        }
      }
    }
  }
  return sys;
}

BlockSystem assemble_system(const SimulationConfig& cfg, Complex omega) {
  return assemble_system(cfg, omega, interior_bases(cfg, omega));
}

InteriorCoefficients solve_interior(const BlockSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "block system numerically singular (rcond = " << rcond << ") at omega = ("
        << sys.omega.real() << ", " << sys.omega.imag()
        << "); the frequency is at or next to a resonance";
    throw SingularSystemError(msg.str());
  }

  Eigen::VectorXcd w = lu.solve(sys.rhs);
  if (!w.allFinite()) {
    throw SingularSystemError("block system solve produced non-finite coefficients");
  }

  const Eigen::MatrixXd abs_matrix = sys.matrix.cwiseAbs();
  const Eigen::VectorXd abs_rhs = sys.rhs.cwiseAbs();
  auto componentwise_residual = [&](const Eigen::VectorXcd& sol) {
    const Eigen::VectorXcd r = sys.rhs - sys.matrix * sol;
    const Eigen::VectorXd denom = abs_matrix * sol.cwiseAbs() + abs_rhs;
    double worst = 0.0;
    for (Eigen::Index idx = 0; idx < r.size(); ++idx) {
      const double num = std::abs(r(idx));
      if (num == 0.0) continue;
      if (denom(idx) == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, num / denom(idx));
    }
    return worst;
  };

  constexpr double kResidualTol = 1e-10;
  double residual = componentwise_residual(w);
  for (int refine = 0; refine < 3 && residual > kResidualTol; ++refine) {
    w += lu.solve(sys.rhs - sys.matrix * w);
    residual = componentwise_residual(w);
  }
  if (!(residual <= kResidualTol)) {
    std::ostringstream msg;
    msg << "block system residual " << residual << " exceeds " << kResidualTol << " at omega = ("
        << sys.omega.real() << ", " << sys.omega.imag() << ")";
    throw NumericalError(msg.str());
  }

  InteriorCoefficients out;
  out.n_resonators = sys.n_resonators;
  out.mode_cutoff = sys.mode_cutoff;
  out.values = std::move(w);
  out.rcond_estimate = rcond;
  out.residual = residual;
  return out;
}

namespace {

// Interior trace of mode n of resonator i at x.
Complex interior_value(const InteriorCoefficients& w, const InteriorBasis& basis, std::size_t i,
                       int n, double x) {
  const int cutoff = basis.mode_cutoff;
  Complex sum{0.0, 0.0};
  for (int j = -cutoff; j <= cutoff; ++j) {
    const InteriorMode& m = basis.mode(j);
    sum += (w.outgoing(i, j) * std::exp(kImagUnit * m.wavenumber * x) +
            w.incoming(i, j) * std::exp(-kImagUnit * m.wavenumber * x)) *
           m.shape(n + cutoff);
  }
  return sum;
}

ExteriorCoefficients exterior_map(const InteriorCoefficients& w, const SimulationConfig& cfg,
                                  Complex omega, const std::vector<InteriorBasis>& bases,
                                  bool include_incident) {
  const std::size_t n_res = cfg.resonator_count();
  const int cutoff = cfg.truncation.mode_cutoff;
  const double x_first = cfg.array.left(0);
  const double x_last = cfg.array.right(n_res - 1);

  ExteriorCoefficients ext;
  ext.mode_cutoff = cutoff;
  ext.reflection.resize(2 * cutoff + 1);
  ext.transmission.resize(2 * cutoff + 1);
  ext.gaps.assign(2 * cutoff + 1, std::vector<GapCoefficients>(n_res > 0 ? n_res - 1 : 0));

  for (int n = -cutoff; n <= cutoff; ++n) {
    const Complex k = wavenumbers(omega, n, cfg.modulation.omega(), cfg.physical).outside;
    IncidentTraces inc;
    if (include_incident) inc = incident_traces(cfg, omega, n);

    ext.reflection[n + cutoff] = std::exp(kImagUnit * k * x_first) *
                                 (interior_value(w, bases[0], 0, n, x_first) - inc.left_value);
    ext.transmission[n + cutoff] =
        std::exp(-kImagUnit * k * x_last) *
        (interior_value(w, bases[n_res - 1], n_res - 1, n, x_last) - inc.right_value);

    for (std::size_t g = 0; g + 1 < n_res; ++g) {
      const double a = cfg.array.right(g);
      const double b = cfg.array.left(g + 1);
      GapCoefficients& gap = ext.gaps[n + cutoff][g];
      gap.left_value = interior_value(w, bases[g], g, n, a);
      gap.right_value = interior_value(w, bases[g + 1], g + 1, n, b);
      const Complex kl = k * (b - a);
      if (std::abs(kl) < kZeroWavenumberBand) {
        gap.near_zero_wavenumber = true;
        continue;
      }
      const Complex s = std::sin(kl);
      if (std::abs(s) < kGapSingularityTol) {
        std::ostringstream msg;
        msg << "gap " << g + 1 << " singular for mode " << n << ": sin(k l) vanished";
        throw GapSingularityError(msg.str());
      }
      const Complex pref = -1.0 / (2.0 * kImagUnit * s);
      gap.outgoing = pref * (std::exp(-kImagUnit * k * b) * gap.left_value -
                             std::exp(-kImagUnit * k * a) * gap.right_value);
      gap.incoming = pref * (-std::exp(kImagUnit * k * b) * gap.left_value +
                             std::exp(kImagUnit * k * a) * gap.right_value);
    }
  }
  return ext;
}

}  // namespace

ExteriorCoefficients exterior_from_interior(const InteriorCoefficients& w,
                                            const SimulationConfig& cfg, Complex omega,
                                            const std::vector<InteriorBasis>& bases) {
  return exterior_map(w, cfg, omega, bases, true);
}

Complex ScatteringSolution::mode_profile(int n, double x) const {
  const int cutoff = config.truncation.mode_cutoff;
  const Complex k = wavenumbers(omega, n, config.modulation.omega(), config.physical).outside;
  const auto& array = config.array;
  const std::size_t n_res = array.size();

  if (x <= array.left(0)) {
    return exterior.reflection[n + cutoff] * std::exp(-kImagUnit * k * x);
  }
  if (x >= array.right(n_res - 1)) {
    return exterior.transmission[n + cutoff] * std::exp(kImagUnit * k * x);
  }
  const std::size_t inside = array.resonator_at(x);
  if (inside < n_res) {
    return interior_value(interior, bases[inside], inside, n, x);
  }
  // In a gap (boundary points included on the exterior side).
  for (std::size_t g = 0; g + 1 < n_res; ++g) {
    const double a = array.right(g);
    const double b = array.left(g + 1);
    if (x < a || x > b) continue;
    const GapCoefficients& gap = exterior.gaps[n + cutoff][g];
    if (gap.near_zero_wavenumber) {
      const double s = (x - a) / (b - a);
      return gap.left_value * (1.0 - s) + gap.right_value * s;
    }
    return gap.outgoing * std::exp(kImagUnit * k * x) + gap.incoming * std::exp(-kImagUnit * k * x);
  }
  return {0.0, 0.0};  // unreachable for valid geometry
}

Complex ScatteringSolution::scattered_field(double x, double t) const {
  const int cutoff = config.truncation.mode_cutoff;
  Complex sum{0.0, 0.0};
  for (int n = -cutoff; n <= cutoff; ++n) {
    const Complex freq = omega + static_cast<double>(n) * config.modulation.omega();
    sum += mode_profile(n, x) * std::exp(-kImagUnit * freq * t);
  }
  return sum;
}

Complex ScatteringSolution::total_field(double x, double t) const {
  Complex field = scattered_field(x, t);
  const Complex k0 = omega / config.physical.v_out;
  const auto& inc = config.incident;
  const Complex time_phase = std::exp(-kImagUnit * omega * t);
  if (inc.direction != IncidentDirection::kRight && x < config.array.left(0)) {
    field += inc.amplitude_left * std::exp(kImagUnit * k0 * x) * time_phase;
  }
  if (inc.direction != IncidentDirection::kLeft && x > config.array.right(config.array.size() - 1)) {
    field += inc.amplitude_right * std::exp(-kImagUnit * k0 * x) * time_phase;
  }
  return field;
}

ScatteringSolution solve_scattering(const SimulationConfig& cfg, Complex omega) {
  ScatteringSolution sol{cfg, omega, interior_bases(cfg, omega), {}, {}};
  const BlockSystem sys = assemble_system(cfg, omega, sol.bases);
  sol.interior = solve_interior(sys);
  sol.exterior = exterior_from_interior(sol.interior, cfg, omega, sol.bases);
  return sol;
}

ScatteringSolution solve_scattering(const SimulationConfig& cfg) {
  return solve_scattering(cfg, Complex{cfg.incident.omega, 0.0});
}

PolePencilData pole_pencil(const SimulationConfig& cfg, Complex pole) {
  const BlockSystem sys = assemble_system(cfg, pole);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sys.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  const double largest = svd.singularValues()(0);
  if (!(largest > 0.0)) throw NumericalError("pole pencil: zero operator");

  PolePencilData data;
  data.pole = pole;
  data.right_vector = svd.matrixV().col(last);
  data.left_vector = svd.matrixU().col(last);
  data.right_residual = (sys.matrix * data.right_vector).norm() / largest;
  data.left_residual = (sys.matrix.adjoint() * data.left_vector).norm() / largest;
  constexpr double kNullTol = 1e-8;
  if (!(data.right_residual <= kNullTol) || !(data.left_residual <= kNullTol)) {
    std::ostringstream msg;
    msg << "pole (" << pole.real() << ", " << pole.imag()
        << ") is not an accurate quasifrequency: null-vector residuals " << data.right_residual
        << ", " << data.left_residual;
    throw NumericalError(msg.str());
  }

  const double h = 1e-6 * std::max(std::abs(pole), cfg.modulation.omega());
  const Eigen::MatrixXcd derivative =
      (assemble_system(cfg, pole + h).matrix - assemble_system(cfg, pole - h).matrix) / (2.0 * h);
  data.denominator = data.left_vector.dot(derivative * data.right_vector);
  if (std::abs(data.denominator) < 1e-12 * derivative.norm()) {
    std::ostringstream msg;
    msg << "pole (" << pole.real() << ", " << pole.imag() << ") is degenerate: |<w*, A' w>| = "
        << std::abs(data.denominator);
    throw DegeneratePoleError(msg.str());
  }
  return data;
}

PoleExpansion::PoleExpansion(const SimulationConfig& cfg, const std::vector<Complex>& poles) {
  for (Complex pole : poles) {
    PolePencilData data;
    try {
      data = pole_pencil(cfg, pole);
    } catch (const NumericalError& e) {
      notes_.push_back(e.what());
      continue;
    }
    std::vector<InteriorBasis> bases = interior_bases(cfg, pole);
    const BlockSystem sys = assemble_system(cfg, pole, bases);

    InteriorCoefficients residue;
    residue.n_resonators = cfg.resonator_count();
    residue.mode_cutoff = cfg.truncation.mode_cutoff;
    residue.values = (data.left_vector.dot(sys.rhs) / data.denominator) * data.right_vector;
    // The residue is the singular part of the solution; its exterior
    // coefficients go through the linear part of the map only.
    ExteriorCoefficients ext = exterior_map(residue, cfg, pole, bases, false);

    residues_.push_back(
        ScatteringSolution{cfg, pole, std::move(bases), std::move(residue), std::move(ext)});
    data_.push_back(std::move(data));
  }
}

Complex PoleExpansion::scattered_field(Complex omega, double x, double t,
                                       bool phase_at_operating) const {
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < data_.size(); ++j) {
    const Complex pole = data_[j].pole;
    if (std::abs(omega - pole) < 1e-14) {
      std::ostringstream msg;
      msg << "operating frequency coincides with pole (" << pole.real() << ", " << pole.imag()
          << ")";
      throw NumericalError(msg.str());
    }
    const ScatteringSolution& residue = residues_[j];
    const int cutoff = residue.config.truncation.mode_cutoff;
    const double omega_mod = residue.config.modulation.omega();
    const Complex base = phase_at_operating ? omega : pole;
    Complex pole_sum{0.0, 0.0};
    for (int n = -cutoff; n <= cutoff; ++n) {
      const Complex freq = base + static_cast<double>(n) * omega_mod;
      pole_sum += residue.mode_profile(n, x) * std::exp(-kImagUnit * freq * t);
    }
    sum += pole_sum / (omega - pole);
  }
  return sum;
}

Complex scattered_field_approx(const SimulationConfig& cfg, Complex omega,
                               const std::vector<Complex>& poles, double x, double t,
                               bool phase_at_operating) {
  return PoleExpansion(cfg, poles).scattered_field(omega, x, t, phase_at_operating);
}

}  // namespace tmres
