// scattering.hpp — truncated block linear system, interior/exterior
// coefficient maps, space-time field reconstruction, and the pole-pencil
// near-resonance approximation.
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tmres/config.hpp"
#include "tmres/interior.hpp"
#include "tmres/types.hpp"

namespace tmres {

/// Gap propagator relating boundary values to boundary derivatives of the
/// Helmholtz solution on a gap of the given length:
///   [[ k cos(kl)/sin(kl), -k/sin(kl) ],
///    [ k/sin(kl),         -k cos(kl)/sin(kl) ]].
/// For |k l| < 1e-8 the analytic k -> 0 limit [[1/l, -1/l], [1/l, -1/l]]
/// (linear exterior profile) is returned. Throws GapSingularityError when
/// sin(k l) vanishes away from that limit.
Eigen::Matrix2cd dtn_block(Complex k, double gap_length);

/// The assembled system A(omega, delta) w = rhs over the interior
/// coefficients. One row per (temporal mode n, resonator boundary point);
/// one column pair per (resonator, interior eigenmode).
struct BlockSystem {
  std::size_t n_resonators = 0;
  int mode_cutoff = 0;
  Complex omega;
  Eigen::MatrixXcd matrix;  // 2N(2K+1) square
  Eigen::VectorXcd rhs;     // delta * incident forcing

  Eigen::Index dim() const { return matrix.rows(); }
  /// Row of the derivative-jump equation for temporal mode n at boundary
  /// point b (b = 2i for x_i^-, b = 2i+1 for x_i^+). Rows are mode-major.
  Eigen::Index row(int n, std::size_t boundary) const {
    return static_cast<Eigen::Index>(n + mode_cutoff) * static_cast<Eigen::Index>(2 * n_resonators) +
           static_cast<Eigen::Index>(boundary);
  }
  /// Column of the coefficient of interior eigenmode j of resonator i;
  /// `decaying` selects the e^{-i lambda x} branch. Columns are
  /// resonator-major.
  Eigen::Index col(std::size_t i, int j, bool decaying) const {
    return static_cast<Eigen::Index>(i) * 2 * (2 * mode_cutoff + 1) +
           2 * static_cast<Eigen::Index>(j + mode_cutoff) + (decaying ? 1 : 0);
  }
};

BlockSystem assemble_system(const SimulationConfig& cfg, Complex omega,
                            const std::vector<InteriorBasis>& bases);
BlockSystem assemble_system(const SimulationConfig& cfg, Complex omega);

/// Solution vector of the block system with its quality certificates.
struct InteriorCoefficients {
  std::size_t n_resonators = 0;
  int mode_cutoff = 0;
  Eigen::VectorXcd values;
  double rcond_estimate = 0.0;
  double residual = 0.0;  // componentwise relative backward residual

  Complex outgoing(std::size_t i, int j) const {  // a_j^i
    return values(static_cast<Eigen::Index>(i) * 2 * (2 * mode_cutoff + 1) +
                  2 * (j + mode_cutoff));
  }
  Complex incoming(std::size_t i, int j) const {  // b_j^i
    return values(static_cast<Eigen::Index>(i) * 2 * (2 * mode_cutoff + 1) +
                  2 * (j + mode_cutoff) + 1);
  }
};

/// Partial-pivot solve with iterative refinement. Throws SingularSystemError
/// when the matrix is singular or numerically singular (operating frequency
/// at or next to a resonance), NumericalError when the componentwise
/// residual cannot be pushed below 1e-10.
InteriorCoefficients solve_interior(const BlockSystem& sys);

struct GapCoefficients {
  Complex outgoing{0.0, 0.0};   // coefficient of e^{+ikx}
  Complex incoming{0.0, 0.0};   // coefficient of e^{-ikx}
  Complex left_value{0.0, 0.0};   // exterior trace at the gap's left end
  Complex right_value{0.0, 0.0};  // exterior trace at the gap's right end
  bool near_zero_wavenumber = false;  // linear profile; use the traces
};

/// Exterior coefficients per temporal mode: the two radiating edge
/// coefficients and one (outgoing, incoming) pair per gap.
struct ExteriorCoefficients {
  int mode_cutoff = 0;
  std::vector<Complex> reflection;    // beta_n^0, index n + K
  std::vector<Complex> transmission;  // alpha_n^N, index n + K
  std::vector<std::vector<GapCoefficients>> gaps;  // [n + K][gap]

  Complex reflection_at(int n) const { return reflection[n + mode_cutoff]; }
  Complex transmission_at(int n) const { return transmission[n + mode_cutoff]; }
};

/// Maps interior coefficients to exterior ones: per gap the 2x2 inversion
/// with prefactor -1/(2 i sin(k l)) applied to the interior boundary traces
/// minus the incident traces; the edge coefficients from the radiating
/// half-line formulas.
ExteriorCoefficients exterior_from_interior(const InteriorCoefficients& w,
                                            const SimulationConfig& cfg, Complex omega,
                                            const std::vector<InteriorBasis>& bases);

/// Everything needed to evaluate the scattered and total fields.
struct ScatteringSolution {
  SimulationConfig config;
  Complex omega;
  std::vector<InteriorBasis> bases;
  InteriorCoefficients interior;
  ExteriorCoefficients exterior;

  /// Spatial profile of temporal mode n at position x (piecewise: left
  /// radiating, gaps, interior ansatz, right radiating).
  Complex mode_profile(int n, double x) const;
  /// u_sc(x, t) = sum_n mode_profile(n, x) e^{-i(omega + n omega_mod) t}.
  Complex scattered_field(double x, double t) const;
  /// Scattered field plus the incident wave on its support.
  Complex total_field(double x, double t) const;
};

ScatteringSolution solve_scattering(const SimulationConfig& cfg);  // at cfg.incident.omega
ScatteringSolution solve_scattering(const SimulationConfig& cfg, Complex omega);

/// Rank-one data of the solution operator at one pole: right/left null
/// vectors of A(pole) from its smallest singular pair, and the derivative
/// inner product <w*, dA/domega w> (conjugate-linear in the first slot).
struct PolePencilData {
  Complex pole;
  Eigen::VectorXcd right_vector;
  Eigen::VectorXcd left_vector;
  Complex denominator;
  double right_residual = 0.0;  // ||A w|| / ||A||, unit w
  double left_residual = 0.0;
};

/// Requires `pole` to be an accurate quasifrequency: throws NumericalError
/// when the null-vector residuals exceed 1e-8, DegeneratePoleError when the
/// denominator is numerically zero.
PolePencilData pole_pencil(const SimulationConfig& cfg, Complex pole);

/// Residue expansion of the scattering solution over a set of poles,
/// prepared once and evaluated at many (omega, x, t).
class PoleExpansion {
 public:
  /// Poles must be accurate quasifrequencies (det-root refined). Poles whose
  /// pencil extraction fails are skipped and recorded in notes().
  PoleExpansion(const SimulationConfig& cfg, const std::vector<Complex>& poles);

  /// u_sc(x, t) ~ sum_j sum_n gamma_n^j(x) / (omega - omega_j)
  ///              e^{-i(omega_j + n omega_mod) t}.
  /// `phase_at_operating` swaps omega_j for omega in the time phase.
  Complex scattered_field(Complex omega, double x, double t,
                          bool phase_at_operating = false) const;

  const std::vector<PolePencilData>& poles() const { return data_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t size() const { return data_.size(); }

 private:
  std::vector<PolePencilData> data_;
  std::vector<ScatteringSolution> residues_;  // residue coefficient fields per pole
  std::vector<std::string> notes_;
};

/// One-shot form of the Proposition-style approximation; builds the
/// expansion internally. Guards evaluation at |omega - pole| < 1e-14.
Complex scattered_field_approx(const SimulationConfig& cfg, Complex omega,
                               const std::vector<Complex>& poles, double x, double t,
                               bool phase_at_operating = false);

}  // namespace tmres
