#include "tmres/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tmres/errors.hpp"
#include "tmres/output.hpp"

namespace tmres {

namespace {

using nlohmann::json;

void require_object(const json& node, const std::string& context) {
  if (!node.is_object()) throw ConfigError(context + ": expected an object");
}

void reject_unknown_keys(const json& node, const std::string& context,
                         const std::vector<std::string>& allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(context + ": unknown key '" + it.key() + "'");
  }
}

const json& require_key(const json& node, const std::string& context, const std::string& key) {
  auto it = node.find(key);
  if (it == node.end()) throw ConfigError(context + ": missing required key '" + key + "'");
  return *it;
}

double as_number(const json& node, const std::string& context) {
  if (!node.is_number()) throw ConfigError(context + ": expected a number");
  return node.get<double>();
}

std::size_t as_count(const json& node, const std::string& context) {
  if (!node.is_number_unsigned()) throw ConfigError(context + ": expected a nonnegative integer");
  return node.get<std::size_t>();
}

int as_int(const json& node, const std::string& context) {
  if (!node.is_number_integer()) throw ConfigError(context + ": expected an integer");
  return node.get<int>();
}

// A complex amplitude is a plain number or a two-element [re, im] array.
Complex as_complex(const json& node, const std::string& context) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
    return {node[0].get<double>(), node[1].get<double>()};
  }
  throw ConfigError(context + ": expected a number or [re, im]");
}

json complex_to_json(Complex z) {
  if (z.imag() == 0.0) return json(z.real());
  return json::array({z.real(), z.imag()});
}

}  // namespace

PhysicalParams PhysicalParams::from_moduli(double rho_out, double rho_in, double kappa_out,
                                           double kappa_in) {
  if (!(rho_out > 0.0) || !(rho_in > 0.0) || !(kappa_out > 0.0) || !(kappa_in > 0.0)) {
    throw ConfigError("physical: densities and moduli must be positive");
  }
  PhysicalParams p;
  p.rho_out = rho_out;
  p.rho_in = rho_in;
  p.kappa_out = kappa_out;
  p.kappa_in = kappa_in;
  p.delta = rho_in / rho_out;
  p.v_out = std::sqrt(kappa_out / rho_out);
  p.v_in = std::sqrt(kappa_in / rho_in);
  return p;
}

SimulationConfig::SimulationConfig(PhysicalParams physical_in, ResonatorArray array_in,
                                   ModulationProfile modulation_in, Truncation truncation_in,
                                   IncidentSpec incident_in,
                                   std::optional<UniformGeometry> uniform_in)
    : physical(physical_in),
      array(std::move(array_in)),
      modulation(std::move(modulation_in)),
      truncation(truncation_in),
      incident(incident_in),
      uniform(uniform_in) {
  if (modulation.size() != array.size()) {
    std::ostringstream msg;
    msg << "modulation: need exactly one entry per resonator (" << array.size() << "), got "
        << modulation.size();
    throw ConfigError(msg.str());
  }
  if (truncation.modulation_order < 0) {
    throw ConfigError("truncation: M must be nonnegative");
  }
  if (truncation.mode_cutoff < truncation.modulation_order) {
    throw ConfigError("truncation: K must be at least M");
  }
  if (modulation.order() > truncation.modulation_order) {
    throw ConfigError("truncation: modulation band exceeds M");
  }

  if (!(physical.delta > 0.0 && physical.delta < 1.0)) {
    std::ostringstream msg;
    msg << "contrast delta = " << physical.delta
        << " lies outside (0, 1); the configuration is outside the subwavelength regime";
    warnings.push_back(msg.str());
  }
  const double ratio = modulation.omega() / std::sqrt(physical.delta);
  if (ratio < 0.1 || ratio > 10.0) {
    std::ostringstream msg;
    msg << "omega_mod / sqrt(delta) = " << ratio
        << " lies outside [0.1, 10]; asymptotic accuracy may degrade";
    warnings.push_back(msg.str());
  }
}

SimulationConfig build_config(const nlohmann::json& doc) {
  require_object(doc, "config");
  reject_unknown_keys(doc, "config",
                      {"physical", "geometry", "modulation", "truncation", "incident"});

  const json& phys = require_key(doc, "config", "physical");
  require_object(phys, "physical");
  reject_unknown_keys(phys, "physical", {"rho_out", "rho_in", "kappa_out", "kappa_in"});
  PhysicalParams params = PhysicalParams::from_moduli(
      as_number(require_key(phys, "physical", "rho_out"), "physical.rho_out"),
      as_number(require_key(phys, "physical", "rho_in"), "physical.rho_in"),
      as_number(require_key(phys, "physical", "kappa_out"), "physical.kappa_out"),
      as_number(require_key(phys, "physical", "kappa_in"), "physical.kappa_in"));

  const json& geom = require_key(doc, "config", "geometry");
  require_object(geom, "geometry");
  reject_unknown_keys(geom, "geometry", {"boundaries", "uniform"});
  std::optional<UniformGeometry> uniform;
  std::optional<ResonatorArray> array;
  if (geom.contains("boundaries") && geom.contains("uniform")) {
    throw ConfigError("geometry: give either 'boundaries' or 'uniform', not both");
  }
  if (geom.contains("boundaries")) {
    const json& b = geom["boundaries"];
    if (!b.is_array()) throw ConfigError("geometry.boundaries: expected an array");
    std::vector<double> pts;
    pts.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      pts.push_back(as_number(b[i], "geometry.boundaries[" + std::to_string(i) + "]"));
    }
    array = ResonatorArray::from_boundaries(std::move(pts));
  } else if (geom.contains("uniform")) {
    const json& u = geom["uniform"];
    require_object(u, "geometry.uniform");
    reject_unknown_keys(u, "geometry.uniform", {"n", "length", "gap", "origin"});
    UniformGeometry ug;
    ug.count = as_count(require_key(u, "geometry.uniform", "n"), "geometry.uniform.n");
    ug.length = as_number(require_key(u, "geometry.uniform", "length"), "geometry.uniform.length");
    ug.gap = as_number(require_key(u, "geometry.uniform", "gap"), "geometry.uniform.gap");
    ug.origin = u.contains("origin") ? as_number(u["origin"], "geometry.uniform.origin") : 0.0;
    uniform = ug;
    array = uniform_array(ug.count, ug.length, ug.gap, ug.origin);
  } else {
    throw ConfigError("geometry: need 'boundaries' or 'uniform'");
  }

  const json& mod = require_key(doc, "config", "modulation");
  require_object(mod, "modulation");
  reject_unknown_keys(mod, "modulation", {"omega", "entries"});
  const double omega_mod = as_number(require_key(mod, "modulation", "omega"), "modulation.omega");
  const json& entries = require_key(mod, "modulation", "entries");
  if (!entries.is_array() || entries.empty()) {
    throw ConfigError("modulation.entries: expected a nonempty array");
  }
  std::vector<ModulationProfile::CosineEntry> mod_entries;
  mod_entries.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ctx = "modulation.entries[" + std::to_string(i) + "]";
    const json& e = entries[i];
    require_object(e, ctx);
    reject_unknown_keys(e, ctx, {"eps", "phi"});
    ModulationProfile::CosineEntry entry;
    entry.eps = as_number(require_key(e, ctx, "eps"), ctx + ".eps");
    entry.phi = e.contains("phi") ? as_number(e["phi"], ctx + ".phi") : 0.0;
    mod_entries.push_back(entry);
  }
  ModulationProfile modulation = ModulationProfile::cosine(omega_mod, std::move(mod_entries));

  const json& trunc = require_key(doc, "config", "truncation");
  require_object(trunc, "truncation");
  reject_unknown_keys(trunc, "truncation", {"K", "M"});
  Truncation truncation;
  truncation.mode_cutoff = as_int(require_key(trunc, "truncation", "K"), "truncation.K");
  truncation.modulation_order = trunc.contains("M") ? as_int(trunc["M"], "truncation.M") : 1;
  if (truncation.mode_cutoff < 0) throw ConfigError("truncation.K: must be nonnegative");

  const json& inc = require_key(doc, "config", "incident");
  require_object(inc, "incident");
  reject_unknown_keys(inc, "incident", {"direction", "amplitude", "amplitudes", "omega"});
  IncidentSpec incident;
  const json& dir_node = require_key(inc, "incident", "direction");
  if (!dir_node.is_string()) throw ConfigError("incident.direction: expected a string");
  const std::string dir = dir_node.get<std::string>();
  if (dir == "left") {
    incident.direction = IncidentDirection::kLeft;
  } else if (dir == "right") {
    incident.direction = IncidentDirection::kRight;
  } else if (dir == "both") {
    incident.direction = IncidentDirection::kBoth;
  } else {
    throw ConfigError("incident.direction: expected \"left\", \"right\" or \"both\"");
  }
  incident.omega = as_number(require_key(inc, "incident", "omega"), "incident.omega");
  if (incident.direction == IncidentDirection::kBoth) {
    if (inc.contains("amplitude")) {
      throw ConfigError("incident: use 'amplitudes' [left, right] for direction \"both\"");
    }
    const json& amps = require_key(inc, "incident", "amplitudes");
    if (!amps.is_array() || amps.size() != 2) {
      throw ConfigError("incident.amplitudes: expected [left, right]");
    }
    incident.amplitude_left = as_complex(amps[0], "incident.amplitudes[0]");
    incident.amplitude_right = as_complex(amps[1], "incident.amplitudes[1]");
  } else {
    if (inc.contains("amplitudes")) {
      throw ConfigError("incident: 'amplitudes' is only valid for direction \"both\"");
    }
    Complex amp{1.0, 0.0};
    if (inc.contains("amplitude")) amp = as_complex(inc["amplitude"], "incident.amplitude");
    if (incident.direction == IncidentDirection::kLeft) {
      incident.amplitude_left = amp;
      incident.amplitude_right = {0.0, 0.0};
    } else {
      incident.amplitude_left = {0.0, 0.0};
      incident.amplitude_right = amp;
    }
  }

  return SimulationConfig(params, std::move(*array), std::move(modulation), truncation, incident,
                          uniform);
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return build_config(doc);
}

nlohmann::json to_json(const SimulationConfig& cfg) {
  nlohmann::json doc;
  doc["physical"] = {{"rho_out", cfg.physical.rho_out},
                     {"rho_in", cfg.physical.rho_in},
                     {"kappa_out", cfg.physical.kappa_out},
                     {"kappa_in", cfg.physical.kappa_in}};
  if (cfg.uniform) {
    doc["geometry"] = {{"uniform",
                        {{"n", cfg.uniform->count},
                         {"length", cfg.uniform->length},
                         {"gap", cfg.uniform->gap},
                         {"origin", cfg.uniform->origin}}}};
  } else {
    doc["geometry"] = {{"boundaries", cfg.array.boundaries()}};
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : cfg.modulation.entries()) {
    entries.push_back({{"eps", e.eps}, {"phi", e.phi}});
  }
  doc["modulation"] = {{"omega", cfg.modulation.omega()}, {"entries", entries}};
  doc["truncation"] = {{"K", cfg.truncation.mode_cutoff}, {"M", cfg.truncation.modulation_order}};
  nlohmann::json inc;
  switch (cfg.incident.direction) {
    case IncidentDirection::kLeft:
      inc["direction"] = "left";
      inc["amplitude"] = complex_to_json(cfg.incident.amplitude_left);
      break;
    case IncidentDirection::kRight:
      inc["direction"] = "right";
      inc["amplitude"] = complex_to_json(cfg.incident.amplitude_right);
      break;
    case IncidentDirection::kBoth:
      inc["direction"] = "both";
      inc["amplitudes"] = nlohmann::json::array({complex_to_json(cfg.incident.amplitude_left),
                                                 complex_to_json(cfg.incident.amplitude_right)});
      break;
  }
  inc["omega"] = cfg.incident.omega;
  doc["incident"] = inc;
  return doc;
}

std::string config_hash(const SimulationConfig& cfg) { return hex64(fnv1a(to_json(cfg).dump())); }

SimulationConfig reference_config(std::size_t n_resonators, double eps, double incident_omega) {
  PhysicalParams params = PhysicalParams::from_moduli(1.0, 1e-4, 1.0, 1e-4);
  UniformGeometry ug;
  ug.count = n_resonators;
  ug.length = 2.0;
  ug.gap = 10.0;
  ug.origin = 0.0;
  std::vector<ModulationProfile::CosineEntry> entries(n_resonators);
  for (std::size_t i = 0; i < n_resonators; ++i) {
    entries[i].eps = eps;
    entries[i].phi = std::numbers::pi / static_cast<double>(i + 1);
  }
  IncidentSpec inc;
  inc.direction = IncidentDirection::kLeft;
  inc.amplitude_left = {1.0, 0.0};
  inc.omega = incident_omega;
  return SimulationConfig(params, uniform_array(ug.count, ug.length, ug.gap, ug.origin),
                          ModulationProfile::cosine(0.03, std::move(entries)),
                          Truncation{4, 1}, inc, ug);
}

SimulationConfig with_uniform_eps(const SimulationConfig& cfg, double eps) {
  if (!cfg.modulation.is_cosine()) {
    throw ConfigError("eps sweep requires the cosine modulation family");
  }
  std::vector<ModulationProfile::CosineEntry> entries = cfg.modulation.entries();
  for (auto& e : entries) e.eps = eps;
  return SimulationConfig(cfg.physical, cfg.array,
                          ModulationProfile::cosine(cfg.modulation.omega(), std::move(entries)),
                          cfg.truncation, cfg.incident, cfg.uniform);
}

SimulationConfig with_incident_omega(const SimulationConfig& cfg, double omega) {
  IncidentSpec inc = cfg.incident;
  inc.omega = omega;
  return SimulationConfig(cfg.physical, cfg.array, cfg.modulation, cfg.truncation, inc,
                          cfg.uniform);
}

SimulationConfig with_resonator_length(const SimulationConfig& cfg, double length) {
  if (!cfg.uniform) {
    throw ConfigError("length sweep requires a uniform geometry specification");
  }
  UniformGeometry ug = *cfg.uniform;
  ug.length = length;
  return SimulationConfig(cfg.physical, uniform_array(ug.count, ug.length, ug.gap, ug.origin),
                          cfg.modulation, cfg.truncation, cfg.incident, ug);
}

SimulationConfig with_mode_cutoff(const SimulationConfig& cfg, int mode_cutoff) {
  Truncation t = cfg.truncation;
  t.mode_cutoff = mode_cutoff;
  return SimulationConfig(cfg.physical, cfg.array, cfg.modulation, t, cfg.incident, cfg.uniform);
}

}  // namespace tmres
