#include "tmres/energy.hpp"

#include <cmath>
#include <limits>

#include "tmres/errors.hpp"
#include "tmres/parallel.hpp"
#include "tmres/quasifreq.hpp"

namespace tmres {

const char* regime_name(EnergyRegime r) {
  switch (r) {
    case EnergyRegime::kGain: return "gain";
    case EnergyRegime::kConserve: return "conserve";
    case EnergyRegime::kLoss: return "loss";
  }
  return "unknown";
}

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::kEps: return "eps";
    case SweepAxis::kOmega: return "omega";
    case SweepAxis::kLength: return "length";
  }
  return "unknown";
}

SweepAxis axis_from_name(const std::string& name) {
  if (name == "eps") return SweepAxis::kEps;
  if (name == "omega") return SweepAxis::kOmega;
  if (name == "length") return SweepAxis::kLength;
  throw ConfigError("unknown sweep axis '" + name + "' (expected eps, omega or length)");
}

ModeScatteringTable mode_table(const ScatteringSolution& sol) {
  const int cutoff = sol.config.truncation.mode_cutoff;
  const double omega_mod = sol.config.modulation.omega();

  ModeScatteringTable table;
  table.mode_cutoff = cutoff;
  table.reflection = sol.exterior.reflection;
  table.transmission = sol.exterior.transmission;
  table.cross_section.resize(2 * cutoff + 1);
  table.negative_frequency.resize(2 * cutoff + 1);
  double total = 0.0;
  for (int n = -cutoff; n <= cutoff; ++n) {
    const double cs =
        std::norm(table.reflection_at(n)) + std::norm(table.transmission_at(n));
    table.cross_section[n + cutoff] = cs;
    total += cs;
    table.negative_frequency[n + cutoff] = (sol.omega.real() + n * omega_mod) < 0.0;
  }
  table.total = total;
  table.reference = std::norm(sol.config.incident.amplitude_left) +
                    std::norm(sol.config.incident.amplitude_right);
  if (total > table.reference + kRegimeTolerance) {
    table.regime = EnergyRegime::kGain;
  } else if (total < table.reference - kRegimeTolerance) {
    table.regime = EnergyRegime::kLoss;
  } else {
    table.regime = EnergyRegime::kConserve;
  }
  return table;
}

EnergySweep energy_sweep(const SimulationConfig& cfg, SweepAxis axis,
                         const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("energy sweep: empty grid");

  EnergySweep sweep;
  sweep.axis = axis;
  if (axis == SweepAxis::kOmega) {
    sweep.markers = floquet_quasifrequencies(cfg).values;
  }

  sweep.rows.assign(grid.size(), SweepRow{});
  detail::parallel_for(grid.size(), [&](std::size_t idx) {
    SweepRow& row = sweep.rows[idx];
    row.axis_value = grid[idx];
    try {
      SimulationConfig point = [&] {
        switch (axis) {
          case SweepAxis::kEps: return with_uniform_eps(cfg, grid[idx]);
          case SweepAxis::kOmega: return with_incident_omega(cfg, grid[idx]);
          case SweepAxis::kLength: return with_resonator_length(cfg, grid[idx]);
        }
        throw ConfigError("energy sweep: bad axis");
      }();
      row.table = mode_table(solve_scattering(point));
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    if (axis == SweepAxis::kOmega && !sweep.markers.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (Complex m : sweep.markers) {
        if (std::abs(m.real() - grid[idx]) < std::abs(best - grid[idx])) best = m.real();
      }
      row.nearest_marker = best;
    }
  });
  return sweep;
}

}  // namespace tmres
