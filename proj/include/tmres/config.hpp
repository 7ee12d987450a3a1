// config.hpp — physical parameters and the simulation configuration document.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmres/geometry.hpp"
#include "tmres/modulation.hpp"
#include "tmres/types.hpp"

namespace tmres {

/// Material constants of the two-phase medium plus the derived contrast and
/// wave speeds. All quantities are nondimensional.
struct PhysicalParams {
  double rho_out = 1.0;
  double rho_in = 1e-4;
  double kappa_out = 1.0;
  double kappa_in = 1e-4;
  double delta = 1e-4;  // rho_in / rho_out
  double v_out = 1.0;   // sqrt(kappa_out / rho_out)
  double v_in = 1.0;    // sqrt(kappa_in / rho_in)

  static PhysicalParams from_moduli(double rho_out, double rho_in, double kappa_out,
                                    double kappa_in);
};

/// Truncation orders: scattered-field temporal modes n in [-mode_cutoff,
/// mode_cutoff]; the modulation band is [-modulation_order, modulation_order].
struct Truncation {
  int mode_cutoff = 4;       // K
  int modulation_order = 1;  // M for the cosine family

  int dim() const { return 2 * mode_cutoff + 1; }
};

enum class IncidentDirection { kLeft, kRight, kBoth };

struct IncidentSpec {
  IncidentDirection direction = IncidentDirection::kLeft;
  Complex amplitude_left{1.0, 0.0};   // theta_1, e^{+ikx} support x < x_1^-
  Complex amplitude_right{0.0, 0.0};  // theta_2, e^{-ikx} support x > x_N^+
  double omega = 0.0;                 // operating frequency
};

struct UniformGeometry {
  std::size_t count = 1;
  double length = 2.0;
  double gap = 10.0;
  double origin = 0.0;
};

/// Full immutable description of one simulation. Warnings collected at
/// construction (regime checks that do not reject the input) are stored on
/// the object for the caller to surface.
struct SimulationConfig {
  PhysicalParams physical;
  ResonatorArray array;
  ModulationProfile modulation;
  Truncation truncation;
  IncidentSpec incident;
  std::optional<UniformGeometry> uniform;  // set when geometry came in uniform form
  std::vector<std::string> warnings;

  SimulationConfig(PhysicalParams physical, ResonatorArray array, ModulationProfile modulation,
                   Truncation truncation, IncidentSpec incident,
                   std::optional<UniformGeometry> uniform = std::nullopt);

  std::size_t resonator_count() const { return array.size(); }
};

/// Builds and validates a configuration from a JSON document. Unknown keys
/// are rejected at every level.
SimulationConfig build_config(const nlohmann::json& doc);
SimulationConfig load_config(const std::string& path);

/// Canonical JSON form; build_config(to_json(cfg)) reproduces the
/// configuration bit for bit.
nlohmann::json to_json(const SimulationConfig& cfg);

/// 16-hex-digit FNV-1a hash of the canonical JSON form.
std::string config_hash(const SimulationConfig& cfg);

/// The reference setup used throughout the experiments: delta = 1e-4,
/// v_in = v_out = 1, omega_mod = 0.03, mode cutoff 4, n resonators of length
/// 2 with gaps 10, uniform modulation amplitude `eps`, phases pi / i
/// (1-based index i).
SimulationConfig reference_config(std::size_t n_resonators, double eps,
                                  double incident_omega = 0.0);

// Sweep helpers: value copies with one knob changed, revalidated.
SimulationConfig with_uniform_eps(const SimulationConfig& cfg, double eps);
SimulationConfig with_incident_omega(const SimulationConfig& cfg, double omega);
SimulationConfig with_resonator_length(const SimulationConfig& cfg, double length);
SimulationConfig with_mode_cutoff(const SimulationConfig& cfg, int mode_cutoff);

}  // namespace tmres
