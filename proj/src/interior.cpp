#include "tmres/interior.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tmres/errors.hpp"

namespace tmres {

ModeWavenumbers wavenumbers(Complex omega, int n, double omega_mod, const PhysicalParams& p) {
  const Complex shifted = omega + static_cast<double>(n) * omega_mod;
  return {shifted / p.v_out, shifted / p.v_in};
}

InteriorCouplingMatrix build_interior_matrix(std::size_t i, Complex omega,
                                             const SimulationConfig& cfg) {
  const int cutoff = cfg.truncation.mode_cutoff;
  const int band = cfg.modulation.order();
  const int dim = 2 * cutoff + 1;

  InteriorCouplingMatrix mat;
  mat.resonator = i;
  mat.omega = omega;
  mat.mode_cutoff = cutoff;
  mat.band = band;
  mat.entries = Eigen::MatrixXcd::Zero(dim, dim);

  std::vector<Complex> k_in(dim);
  for (int n = -cutoff; n <= cutoff; ++n) {
    k_in[n + cutoff] = wavenumbers(omega, n, cfg.modulation.omega(), cfg.physical).inside;
  }
  for (int n = -cutoff; n <= cutoff; ++n) {
    for (int m = -band; m <= band; ++m) {
      const int col = n - m;
      if (col < -cutoff || col > cutoff) continue;  // clipped at the truncation edge
      mat.entries(n + cutoff, col + cutoff) =
          cfg.modulation.fourier_coeff(i, m) * k_in[n + cutoff] * k_in[col + cutoff];
    }
  }
  return mat;
}

namespace {

int dominant_row(const Eigen::VectorXcd& v) {
  int best = 0;
  double best_mag = -1.0;
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    const double mag = std::abs(v(r));
    if (mag > best_mag) {
      best_mag = mag;
      best = static_cast<int>(r);
    }
  }
  return best;
}

// Rotate the dominant component onto the positive real axis so the basis is
// a locally smooth, reproducible function of omega.
void fix_phase(Eigen::VectorXcd& v, int dominant) {
  const Complex pivot = v(dominant);
  const double mag = std::abs(pivot);
  if (mag > 0.0) v *= std::conj(pivot) / mag;
}

}  // namespace

InteriorBasis interior_eigenbasis(const InteriorCouplingMatrix& mat) {
  const int dim = 2 * mat.mode_cutoff + 1;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat.entries);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "interior eigensolver failed for resonator " << mat.resonator + 1 << " at omega = ("
        << mat.omega.real() << ", " << mat.omega.imag() << ")";
    throw EigenSolveError(msg.str());
  }

  std::vector<InteriorMode> modes(dim);
  for (int idx = 0; idx < dim; ++idx) {
    InteriorMode m;
    m.eigenvalue = solver.eigenvalues()(idx);
    m.wavenumber = principal_sqrt(m.eigenvalue);
    m.shape = solver.eigenvectors().col(idx);
    m.shape.normalize();
    m.dominant_mode = dominant_row(m.shape) - mat.mode_cutoff;
    fix_phase(m.shape, m.dominant_mode + mat.mode_cutoff);
    modes[idx] = std::move(m);
  }

  std::sort(modes.begin(), modes.end(), [](const InteriorMode& a, const InteriorMode& b) {
    if (a.dominant_mode != b.dominant_mode) return a.dominant_mode < b.dominant_mode;
    if (a.eigenvalue.imag() != b.eigenvalue.imag()) return a.eigenvalue.imag() < b.eigenvalue.imag();
    return a.eigenvalue.real() < b.eigenvalue.real();
  });

  // Orthonormalize eigenvectors within numerically degenerate clusters.
  const double matrix_scale = std::max(1.0, mat.entries.norm());
  const double cluster_gap = 1e-12 * matrix_scale;
  for (int start = 0; start < dim;) {
    int end = start + 1;
    while (end < dim &&
           std::abs(modes[end].eigenvalue - modes[end - 1].eigenvalue) < cluster_gap) {
      ++end;
    }
    if (end - start > 1) {
      std::sort(modes.begin() + start, modes.begin() + end,
                [](const InteriorMode& a, const InteriorMode& b) {
                  return a.eigenvalue.imag() < b.eigenvalue.imag();
                });
      for (int a = start; a < end; ++a) {
        for (int b = start; b < a; ++b) {
          modes[a].shape -= modes[b].shape.dot(modes[a].shape) * modes[b].shape;
        }
        const double norm = modes[a].shape.norm();
        if (norm > 0.0) modes[a].shape /= norm;
        modes[a].dominant_mode = dominant_row(modes[a].shape) - mat.mode_cutoff;
        fix_phase(modes[a].shape, modes[a].dominant_mode + mat.mode_cutoff);
      }
    }
    start = end;
  }

  // Residual contract: every pair must satisfy the eigen equation.
  const double tol = 1e-10 * std::max(1e-300, mat.entries.norm());
  for (const auto& m : modes) {
    const double res = (mat.entries * m.shape - m.eigenvalue * m.shape).norm();
    if (!(res <= tol)) {
      std::ostringstream msg;
      msg << "interior eigenpair residual " << res << " exceeds tolerance for resonator "
          << mat.resonator + 1 << " at omega = (" << mat.omega.real() << ", " << mat.omega.imag()
          << ")";
      throw EigenSolveError(msg.str());
    }
  }

  InteriorBasis basis;
  basis.resonator = mat.resonator;
  basis.mode_cutoff = mat.mode_cutoff;
  basis.modes = std::move(modes);
  return basis;
}

std::vector<InteriorBasis> interior_bases(const SimulationConfig& cfg, Complex omega) {
  std::vector<InteriorBasis> bases;
  bases.reserve(cfg.resonator_count());
  for (std::size_t i = 0; i < cfg.resonator_count(); ++i) {
    bases.push_back(interior_eigenbasis(build_interior_matrix(i, omega, cfg)));
  }
  return bases;
}

}  // namespace tmres
