// energy.hpp — mode-resolved reflection/transmission coefficients, the
// scattered energy flux, and the gain/conservation/loss classification.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tmres/scattering.hpp"

namespace tmres {

enum class EnergyRegime { kGain, kConserve, kLoss };

const char* regime_name(EnergyRegime r);

/// Classification band around the incident reference flux; below this the
/// solver residual noise would misclassify.
inline constexpr double kRegimeTolerance = 1e-6;

struct ModeScatteringTable {
  int mode_cutoff = 0;
  std::vector<Complex> reflection;       // R_n = beta_n^0, index n + K
  std::vector<Complex> transmission;     // T_n = alpha_n^N
  std::vector<double> cross_section;     // |R_n|^2 + |T_n|^2
  std::vector<bool> negative_frequency;  // omega + n omega_mod < 0
  double total = 0.0;                    // E = sum of cross sections
  double reference = 1.0;                // incident flux |theta|^2
  EnergyRegime regime = EnergyRegime::kConserve;

  Complex reflection_at(int n) const { return reflection[n + mode_cutoff]; }
  Complex transmission_at(int n) const { return transmission[n + mode_cutoff]; }
  double cross_section_at(int n) const { return cross_section[n + mode_cutoff]; }
};

/// Per-mode table of a solved scattering problem; the regime is decided
/// against the incident flux with tolerance kRegimeTolerance.
ModeScatteringTable mode_table(const ScatteringSolution& sol);

enum class SweepAxis { kEps, kOmega, kLength };

const char* axis_name(SweepAxis a);
SweepAxis axis_from_name(const std::string& name);

struct SweepRow {
  double axis_value = 0.0;
  bool ok = false;
  std::string error;         // short token when !ok
  ModeScatteringTable table; // valid when ok
  double nearest_marker = std::numeric_limits<double>::quiet_NaN();
};

struct EnergySweep {
  SweepAxis axis = SweepAxis::kEps;
  std::vector<SweepRow> rows;
  /// Floquet quasifrequencies of the base configuration; populated for
  /// omega sweeps, where each row is annotated with the nearest Re value.
  std::vector<Complex> markers;
};

/// One full scattering solve per grid point, data-parallel, rows emitted in
/// grid order. Per-point failures are recorded in the row and the sweep
/// continues.
EnergySweep energy_sweep(const SimulationConfig& cfg, SweepAxis axis,
                         const std::vector<double>& grid);

}  // namespace tmres
