// interior.hpp — interior mode-coupling matrix and its eigenbasis.
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tmres/config.hpp"
#include "tmres/types.hpp"

namespace tmres {

struct ModeWavenumbers {
  Complex outside;  // (omega + n omega_mod) / v_out
  Complex inside;   // (omega + n omega_mod) / v_in
};

/// Wavenumbers of the n-th temporal mode. Zero is a legal degenerate value
/// (omega + n omega_mod = 0) and is handled downstream.
ModeWavenumbers wavenumbers(Complex omega, int n, double omega_mod, const PhysicalParams& p);

/// Principal square root: nonnegative real part, ties broken toward
/// nonnegative imaginary part.
inline Complex principal_sqrt(Complex z) {
  Complex r = std::sqrt(z);
  if (r.real() < 0.0) r = -r;
  if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
  return r;
}

/// Truncated coupling matrix of one resonator. Row n, column n' carry
/// c_{i,n-n'} k_in^(n) k_in^(n'), with n, n' in [-K, K]; entries outside the
/// band |n - n'| <= M are exactly zero. Rows near the edge simply clip the
/// couplings to modes outside [-K, K].
struct InteriorCouplingMatrix {
  std::size_t resonator = 0;
  Complex omega;             // frequency the matrix was built at (diagnostics)
  int mode_cutoff = 0;       // K
  int band = 0;              // M
  Eigen::MatrixXcd entries;  // (2K+1) x (2K+1), index n + K

  Complex at(int row_mode, int col_mode) const {
    return entries(row_mode + mode_cutoff, col_mode + mode_cutoff);
  }
};

InteriorCouplingMatrix build_interior_matrix(std::size_t i, Complex omega,
                                             const SimulationConfig& cfg);

struct InteriorMode {
  Complex eigenvalue;      // lambda-tilde
  Complex wavenumber;      // principal square root of the eigenvalue
  Eigen::VectorXcd shape;  // unit-norm eigenvector over temporal modes
  int dominant_mode = 0;   // temporal mode index of the largest component
};

/// Eigenpairs of the coupling matrix, sorted by the temporal-mode index of
/// each eigenvector's largest-magnitude component so that the static limit
/// maps mode j to Fourier mode n = j. Eigenvectors are unit-normalized with
/// the dominant component rotated to the positive real axis; numerically
/// degenerate clusters are orthonormalized and ordered by imaginary part.
struct InteriorBasis {
  std::size_t resonator = 0;
  int mode_cutoff = 0;
  std::vector<InteriorMode> modes;  // size 2K+1

  const InteriorMode& mode(int j) const { return modes[j + mode_cutoff]; }
};

InteriorBasis interior_eigenbasis(const InteriorCouplingMatrix& mat);

/// Eigenbases of all resonators at one frequency.
std::vector<InteriorBasis> interior_bases(const SimulationConfig& cfg, Complex omega);

}  // namespace tmres
