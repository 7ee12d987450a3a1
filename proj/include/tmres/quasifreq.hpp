// quasifreq.hpp — subwavelength resonant quasifrequencies by three routes:
// Floquet exponents of the capacitance ODE, closed forms for a single
// resonator, and roots of the scattering determinant.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmres/config.hpp"
#include "tmres/types.hpp"

namespace tmres {

/// N x N capacitance matrix of the chain: flux jumps of the harmonic
/// profiles that are 1 on one resonator and 0 on the others.
struct CapacitanceMatrix {
  Eigen::MatrixXd entries;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Closed-form tridiagonal assembly from the gap lengths: diagonal
/// 1/gap_left + 1/gap_right (edge rows drop the missing term), off-diagonal
/// -1/gap. N = 1 gives the 1x1 zero matrix.
CapacitanceMatrix capacitance_matrix(const ResonatorArray& array);

/// Independent route: second-order finite differences of the gap profiles on
/// a uniform grid of step ~h, flux jumps extracted with one-sided
/// three-point stencils. Requires at least 10 cells per gap.
CapacitanceMatrix capacitance_oracle(const ResonatorArray& array, double h);

enum class QuasifreqMethod { kFloquet, kClosedForm, kDetRoot };

const char* method_name(QuasifreqMethod m);

struct QuasifrequencySet {
  QuasifreqMethod method = QuasifreqMethod::kFloquet;
  /// Real parts folded into [-omega_mod/2, omega_mod/2); sorted by (Re, Im).
  std::vector<Complex> values;
  /// Per-value diagnostic: monodromy eigenpair residual (Floquet), smallest
  /// over largest singular value of the scattering operator (det-root),
  /// zero (closed form).
  std::vector<double> residuals;
  /// Per-seed failures and other non-fatal events.
  std::vector<std::string> notes;
};

/// One-period fundamental solution (monodromy matrix) of the first-order
/// form of the capacitance ODE, integrated adaptively to relative tolerance
/// 1e-12 / absolute 1e-14 from the identity.
Eigen::MatrixXd monodromy_matrix(const SimulationConfig& cfg);

/// 2N Floquet exponents i log(mu_j) / T of the monodromy eigenvalues.
QuasifrequencySet floquet_quasifrequencies(const SimulationConfig& cfg);

/// Single-resonator closed forms: the zero quasifrequency plus
/// (-2 i v_in^2 delta / (l v_out)) * mean of kappa over one period. The mean
/// is 1/sqrt(1 - eps^2) for the cosine family, quadrature otherwise, and the
/// static case returns the exact logarithmic resonance. Throws ConfigError
/// unless N = 1.
QuasifrequencySet closed_form_single(const SimulationConfig& cfg);

/// Exact static single-resonator resonance
/// -(i v_in / l) log(1 + 2 v_in delta / (v_out - v_in delta)).
Complex static_single_resonance(const PhysicalParams& p, double length);

/// det A(omega) of the truncated scattering operator via partial-pivot
/// factorization with a running power-of-two rescale.
ScaledComplex scattering_determinant(const SimulationConfig& cfg, Complex omega);

/// Muller iteration on the rescaled determinant. Default seeds are the
/// Floquet values perturbed by +-(1+i) delta. Converged roots are folded
/// into the fundamental domain and deduplicated at tolerance 1e-10;
/// non-convergence from a seed is recorded in `notes`, not fatal.
QuasifrequencySet det_root_quasifrequencies(const SimulationConfig& cfg,
                                            std::vector<Complex> seeds = {});

}  // namespace tmres
