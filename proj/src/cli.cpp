#include "tmres/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tmres/energy.hpp"
#include "tmres/errors.hpp"
#include "tmres/output.hpp"
#include "tmres/quasifreq.hpp"
#include "tmres/scattering.hpp"

namespace tmres {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<double> parse_grid(const std::string& text) {
  // a:b:n -> n evenly spaced points from a to b inclusive.
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw ConfigError("grid: expected a:b:n, got '" + text + "'");
  }
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    a = std::stod(text.substr(0, first));
    b = std::stod(text.substr(first + 1, second - first - 1));
    n = std::stol(text.substr(second + 1));
  } catch (const std::exception&) {
    throw ConfigError("grid: cannot parse '" + text + "'");
  }
  if (n < 1) throw ConfigError("grid: need at least one point");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] =
        (n == 1) ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse '" + item + "'");
    }
  }
  if (values.empty()) throw ConfigError(what + ": empty list");
  return values;
}

// x, x+yi, x-yi (exponents allowed in both parts).
Complex parse_complex(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw ConfigError("omega: empty value");
  if (s.back() != 'i' && s.back() != 'I') {
    try {
      return {std::stod(s), 0.0};
    } catch (const std::exception&) {
      throw ConfigError("omega: cannot parse '" + text + "'");
    }
  }
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) throw ConfigError("omega: expected x+yi, got '" + text + "'");
  try {
    return {std::stod(s.substr(0, split)), std::stod(s.substr(split))};
  } catch (const std::exception&) {
    throw ConfigError("omega: cannot parse '" + text + "'");
  }
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
};

SimulationConfig load_and_report(const CommonOptions& common) {
  SimulationConfig cfg = load_config(common.config_path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  fs::create_directories(common.out_dir);
  return cfg;
}

int sweep_exit_code(std::size_t failures, std::size_t successes) {
  if (failures == 0) return kExitOk;
  return successes > 0 ? kExitPartialSweep : kExitNumericalError;
}

// ---------------------------------------------------------------------------
// quasifreq

int cmd_quasifreq(const CommonOptions& common, const std::string& method,
                  const std::string& axis_text, const std::string& grid_text,
                  const std::string& command_line) {
  const auto t0 = Clock::now();
  SimulationConfig cfg = load_and_report(common);
  const std::string hash = config_hash(cfg);

  const bool want_floquet = method == "floquet" || method == "all";
  const bool want_closed = method == "closed" || method == "all";
  const bool want_detroot = method == "detroot" || method == "all";
  if (!want_floquet && !want_closed && !want_detroot) {
    throw ConfigError("method: expected floquet, closed, detroot or all");
  }

  std::vector<double> grid;
  std::string axis = axis_text;
  if (!axis.empty()) {
    if (axis != "eps" && axis != "length") {
      throw ConfigError("quasifreq axis: expected eps or length");
    }
    if (grid_text.empty()) throw ConfigError("quasifreq: --axis requires --grid");
    grid = parse_grid(grid_text);
  } else {
    axis = "none";
    grid = {0.0};
  }

  const fs::path csv_path = fs::path(common.out_dir) / "quasifreq.csv";
  CsvWriter csv(csv_path.string(),
                {"axis", "axis_value", "method", "branch", "re_omega", "im_omega", "residual",
                 "cross_dev"},
                hash);

  std::size_t failures = 0, successes = 0;
  struct PointResult {
    std::vector<QuasifrequencySet> sets;
    double cross_dev = 0.0;
  };
  std::vector<PointResult> results(grid.size());

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    SimulationConfig point = cfg;
    try {
      if (axis == "eps") point = with_uniform_eps(cfg, grid[idx]);
      if (axis == "length") point = with_resonator_length(cfg, grid[idx]);
    } catch (const std::exception& e) {
      std::cerr << "point " << grid[idx] << ": " << e.what() << "\n";
      ++failures;
      continue;
    }

    PointResult& res = results[idx];
    std::optional<QuasifrequencySet> floquet;
    auto run = [&](QuasifreqMethod m, auto&& compute) {
      try {
        res.sets.push_back(compute());
        ++successes;
        return true;
      } catch (const std::exception& e) {
        std::cerr << "point " << grid[idx] << " (" << method_name(m) << "): " << e.what() << "\n";
        ++failures;
        return false;
      }
    };
    if (want_floquet) {
      if (run(QuasifreqMethod::kFloquet, [&] { return floquet_quasifrequencies(point); })) {
        floquet = res.sets.back();
      }
    }
    if (want_closed && point.resonator_count() == 1) {
      run(QuasifreqMethod::kClosedForm, [&] { return closed_form_single(point); });
    }
    if (want_detroot) {
      run(QuasifreqMethod::kDetRoot, [&] { return det_root_quasifrequencies(point); });
    }

    if (method == "all" && floquet) {
      double dev = 0.0;
      for (const auto& set : res.sets) {
        if (set.method == QuasifreqMethod::kFloquet) continue;
        for (Complex v : set.values) {
          double nearest = std::numeric_limits<double>::infinity();
          for (Complex f : floquet->values) nearest = std::min(nearest, std::abs(v - f));
          dev = std::max(dev, nearest);
        }
      }
      res.cross_dev = dev;
    }
  }

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    for (const auto& set : results[idx].sets) {
      for (std::size_t b = 0; b < set.values.size(); ++b) {
        csv.row({axis, format_float(grid[idx]), method_name(set.method), std::to_string(b),
                 format_float(set.values[b].real()), format_float(set.values[b].imag()),
                 format_float(set.residuals[b]),
                 method == "all" ? format_float(results[idx].cross_dev) : ""});
      }
      for (const auto& note : set.notes) std::cerr << "note: " << note << "\n";
    }
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = command_line;
  manifest.config_hash = hash;
  manifest.grid = {{"axis", axis}, {"values", grid}, {"method", method}};
  manifest.outputs = {csv_path.string()};
  manifest.timings_ms = {{"total", elapsed_ms(t0)}};
  manifest.write((fs::path(common.out_dir) / "manifest.json").string());
  return sweep_exit_code(failures, successes);
}

// ---------------------------------------------------------------------------
// scatter

int cmd_scatter(const CommonOptions& common, const std::string& omega_text,
                const std::string& grid_text, const std::string& times_text, bool pole_pencil_flag,
                const std::string& command_line) {
  const auto t0 = Clock::now();
  SimulationConfig cfg = load_and_report(common);
  const std::string hash = config_hash(cfg);

  const Complex omega =
      omega_text.empty() ? Complex{cfg.incident.omega, 0.0} : parse_complex(omega_text);

  std::vector<double> xs;
  if (!grid_text.empty()) {
    xs = parse_grid(grid_text);
  } else {
    const double lo = cfg.array.left(0) - 10.0;
    const double hi = cfg.array.right(cfg.array.size() - 1) + 10.0;
    xs = parse_grid(format_float(lo) + ":" + format_float(hi) + ":501");
  }
  const std::vector<double> times =
      times_text.empty() ? std::vector<double>{0.0} : parse_list(times_text, "times");

  const ScatteringSolution sol = solve_scattering(cfg, omega);
  const ModeScatteringTable table = mode_table(sol);

  std::optional<PoleExpansion> expansion;
  if (pole_pencil_flag) {
    const QuasifrequencySet roots = det_root_quasifrequencies(cfg);
    expansion.emplace(cfg, roots.values);
    for (const auto& note : expansion->notes()) std::cerr << "note: " << note << "\n";
    if (expansion->size() == 0) {
      throw NumericalError("pole-pencil: no usable poles");
    }
  }

  std::vector<std::string> columns = {"x",            "t",           "re_total", "im_total",
                                      "re_scattered", "im_scattered"};
  if (expansion) {
    columns.insert(columns.end(), {"re_approx", "im_approx", "rel_diff"});
  }
  const fs::path csv_path = fs::path(common.out_dir) / "scatter_field.csv";
  CsvWriter csv(csv_path.string(), columns, hash);
  for (double t : times) {
    for (double x : xs) {
      const Complex total = sol.total_field(x, t);
      const Complex scattered = sol.scattered_field(x, t);
      std::vector<double> cells = {x,           t,
                                   total.real(), total.imag(),
                                   scattered.real(), scattered.imag()};
      if (expansion) {
        const Complex approx = expansion->scattered_field(omega, x, t);
        const double denom = std::max(std::abs(scattered), 1e-300);
        cells.push_back(approx.real());
        cells.push_back(approx.imag());
        cells.push_back(std::abs(approx - scattered) / denom);
      }
      csv.number_row(cells);
    }
  }

  nlohmann::json out;
  out["config_hash"] = hash;
  out["omega"] = complex_json(omega);
  out["energy"] = table.total;
  out["regime"] = regime_name(table.regime);
  out["reference"] = table.reference;
  nlohmann::json modes = nlohmann::json::array();
  const int cutoff = table.mode_cutoff;
  for (int n = -cutoff; n <= cutoff; ++n) {
    modes.push_back({{"n", n},
                     {"reflection", complex_json(table.reflection_at(n))},
                     {"transmission", complex_json(table.transmission_at(n))},
                     {"cross_section", table.cross_section_at(n)},
                     {"negative_frequency", bool(table.negative_frequency[n + cutoff])}});
  }
  out["modes"] = modes;
  nlohmann::json interior = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.resonator_count(); ++i) {
    nlohmann::json per_res = nlohmann::json::array();
    for (int j = -cutoff; j <= cutoff; ++j) {
      per_res.push_back({{"mode", j},
                         {"outgoing", complex_json(sol.interior.outgoing(i, j))},
                         {"incoming", complex_json(sol.interior.incoming(i, j))}});
    }
    interior.push_back(per_res);
  }
  out["interior"] = interior;
  out["rcond"] = sol.interior.rcond_estimate;
  out["residual"] = sol.interior.residual;
  if (expansion) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : expansion->poles()) poles.push_back(complex_json(p.pole));
    out["poles"] = poles;
  }
  const fs::path json_path = fs::path(common.out_dir) / "scatter_solution.json";
  {
    std::ofstream js(json_path);
    if (!js) throw ConfigError("cannot open output file: " + json_path.string());
    js << out.dump(2) << "\n";
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = command_line;
  manifest.config_hash = hash;
  manifest.grid = {{"x_points", xs.size()}, {"times", times}};
  manifest.outputs = {csv_path.string(), json_path.string()};
  manifest.timings_ms = {{"total", elapsed_ms(t0)}};
  manifest.write((fs::path(common.out_dir) / "manifest.json").string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// energy

int cmd_energy(const CommonOptions& common, const std::string& axis_text,
               const std::string& grid_text, const std::string& command_line) {
  const auto t0 = Clock::now();
  SimulationConfig cfg = load_and_report(common);
  const std::string hash = config_hash(cfg);

  if (axis_text.empty() || grid_text.empty()) {
    throw ConfigError("energy: --axis and --grid are required");
  }
  const SweepAxis axis = axis_from_name(axis_text);
  const std::vector<double> grid = parse_grid(grid_text);

  const EnergySweep sweep = energy_sweep(cfg, axis, grid);

  const int cutoff = cfg.truncation.mode_cutoff;
  std::vector<std::string> columns = {"axis",   "axis_value", "status",
                                      "energy", "regime",     "nearest_marker"};
  for (int n = -cutoff; n <= cutoff; ++n) {
    columns.push_back("cs_" + std::to_string(n));
  }
  columns.push_back("neg_freq_modes");

  const fs::path csv_path = fs::path(common.out_dir) / "energy.csv";
  CsvWriter csv(csv_path.string(), columns, hash);
  std::size_t failures = 0, successes = 0;
  for (const auto& row : sweep.rows) {
    std::vector<std::string> cells = {axis_name(axis), format_float(row.axis_value)};
    if (row.ok) {
      ++successes;
      cells.push_back("ok");
      cells.push_back(format_float(row.table.total));
      cells.push_back(regime_name(row.table.regime));
      cells.push_back(std::isnan(row.nearest_marker) ? "" : format_float(row.nearest_marker));
      std::string flagged;
      for (int n = -cutoff; n <= cutoff; ++n) {
        cells.push_back(format_float(row.table.cross_section_at(n)));
        if (row.table.negative_frequency[n + cutoff]) {
          if (!flagged.empty()) flagged += ";";
          flagged += std::to_string(n);
        }
      }
      cells.push_back(flagged);
    } else {
      ++failures;
      std::cerr << "point " << row.axis_value << ": " << row.error << "\n";
      cells.push_back("error");
      cells.push_back("");
      cells.push_back("");
      cells.push_back(std::isnan(row.nearest_marker) ? "" : format_float(row.nearest_marker));
      for (int n = -cutoff; n <= cutoff; ++n) cells.push_back("");
      cells.push_back("");
    }
    csv.row(cells);
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = command_line;
  manifest.config_hash = hash;
  manifest.grid = {{"axis", axis_name(axis)}, {"values", grid}};
  if (!sweep.markers.empty()) {
    nlohmann::json markers = nlohmann::json::array();
    for (Complex m : sweep.markers) markers.push_back(complex_json(m));
    manifest.grid["markers"] = markers;
  }
  manifest.outputs = {csv_path.string()};
  manifest.timings_ms = {{"total", elapsed_ms(t0)}};
  manifest.write((fs::path(common.out_dir) / "manifest.json").string());
  return sweep_exit_code(failures, successes);
}

// ---------------------------------------------------------------------------
// converge

int cmd_converge(const CommonOptions& common, const std::string& k_text,
                 const std::string& command_line) {
  const auto t0 = Clock::now();
  SimulationConfig cfg = load_and_report(common);
  const std::string hash = config_hash(cfg);

  std::vector<double> k_list_raw = parse_list(k_text, "K list");
  std::vector<int> k_list;
  for (double v : k_list_raw) {
    const int k = static_cast<int>(std::llround(v));
    if (k < 0 || std::abs(v - k) > 0.0) throw ConfigError("K list: expected nonnegative integers");
    k_list.push_back(k);
  }
  for (std::size_t i = 1; i < k_list.size(); ++i) {
    if (k_list[i] <= k_list[i - 1]) throw ConfigError("K list must be strictly ascending");
  }

  // Tracked branch: the Floquet value with the largest real part, ties broken
  // toward the larger decay magnitude.
  const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
  Complex target = floquet.values.front();
  for (Complex v : floquet.values) {
    if (v.real() > target.real() ||
        (v.real() == target.real() && std::abs(v.imag()) > std::abs(target.imag()))) {
      target = v;
    }
  }

  const fs::path csv_path = fs::path(common.out_dir) / "converge.csv";
  CsvWriter csv(csv_path.string(),
                {"K", "re_omega1", "im_omega1", "energy", "abs_r_0", "abs_r_p1", "abs_r_m1",
                 "abs_r_p2", "abs_r_m2", "d_omega1", "d_energy", "d_r_max"},
                hash);

  std::size_t failures = 0, successes = 0;
  bool have_previous = false;
  Complex prev_omega1;
  double prev_energy = 0.0;
  std::array<double, 5> prev_r{};
  for (int k : k_list) {
    try {
      const SimulationConfig point = with_mode_cutoff(cfg, k);
      const QuasifrequencySet roots = det_root_quasifrequencies(point);
      if (roots.values.empty()) throw NumericalError("no determinant roots converged");
      Complex omega1 = roots.values.front();
      for (Complex v : roots.values) {
        if (std::abs(v - target) < std::abs(omega1 - target)) omega1 = v;
      }
      const ModeScatteringTable table = mode_table(solve_scattering(point));
      std::array<double, 5> r{};
      const std::array<int, 5> mode_order = {0, 1, -1, 2, -2};
      for (std::size_t m = 0; m < mode_order.size(); ++m) {
        r[m] = (std::abs(mode_order[m]) <= k) ? std::abs(table.reflection_at(mode_order[m])) : 0.0;
      }

      std::vector<std::string> cells = {std::to_string(k),
                                        format_float(omega1.real()),
                                        format_float(omega1.imag()),
                                        format_float(table.total)};
      for (double v : r) cells.push_back(format_float(v));
      if (have_previous) {
        double d_r = 0.0;
        for (std::size_t m = 0; m < r.size(); ++m) d_r = std::max(d_r, std::abs(r[m] - prev_r[m]));
        cells.push_back(format_float(std::abs(omega1 - prev_omega1)));
        cells.push_back(format_float(std::abs(table.total - prev_energy)));
        cells.push_back(format_float(d_r));
      } else {
        cells.insert(cells.end(), {"", "", ""});
      }
      csv.row(cells);
      prev_omega1 = omega1;
      prev_energy = table.total;
      prev_r = r;
      have_previous = true;
      ++successes;
    } catch (const std::exception& e) {
      std::cerr << "K=" << k << ": " << e.what() << "\n";
      csv.row({std::to_string(k), "", "", "", "", "", "", "", "", "", "", ""});
      ++failures;
    }
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.command = command_line;
  manifest.config_hash = hash;
  manifest.grid = {{"K", k_list}};
  manifest.outputs = {csv_path.string()};
  manifest.timings_ms = {{"total", elapsed_ms(t0)}};
  manifest.write((fs::path(common.out_dir) / "manifest.json").string());
  return sweep_exit_code(failures, successes);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"tmres — wave scattering by time-modulated subwavelength resonators"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string method = "all";
  std::string axis;
  std::string grid;
  std::string omega;
  std::string times;
  std::string k_values = "2,4,6";
  bool pole_pencil_flag = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON configuration file")->required();
    sub->add_option("--out", common.out_dir, "Output directory (default .)");
  };

  CLI::App* quasifreq = app.add_subcommand("quasifreq", "Resonant quasifrequencies");
  add_common(quasifreq);
  quasifreq->add_option("--method", method, "floquet, closed, detroot or all (default all)");
  quasifreq->add_option("--axis", axis, "Sweep axis: eps or length");
  quasifreq->add_option("--grid", grid, "Sweep grid a:b:n");

  CLI::App* scatter = app.add_subcommand("scatter", "Scattered and total wave fields");
  add_common(scatter);
  scatter->add_option("--omega", omega, "Operating frequency x or x+yi (default: config)");
  scatter->add_option("--grid", grid, "Positions a:b:n (default: array plus margins, 501 points)");
  scatter->add_option("--times", times, "Comma-separated sample times (default 0)");
  scatter->add_flag("--pole-pencil", pole_pencil_flag,
                    "Also evaluate the pole-pencil approximation");

  CLI::App* energy = app.add_subcommand("energy", "Scattered energy flux sweeps");
  add_common(energy);
  energy->add_option("--axis", axis, "Sweep axis: eps, omega or length")->required();
  energy->add_option("--grid", grid, "Sweep grid a:b:n")->required();

  CLI::App* converge = app.add_subcommand("converge", "Truncation convergence diagnostic");
  add_common(converge);
  converge->add_option("--K", k_values, "Ascending comma-separated mode cutoffs (default 2,4,6)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream unused;
    const int code = app.exit(e, unused, unused);
    if (code == 0) {  // --help
      std::cout << app.help();
      return kExitOk;
    }
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  std::string command_line = "tmres";
  for (const auto& a : args) command_line += " " + a;

  try {
    if (quasifreq->parsed()) return cmd_quasifreq(common, method, axis, grid, command_line);
    if (scatter->parsed()) {
      return cmd_scatter(common, omega, grid, times, pole_pencil_flag, command_line);
    }
    if (energy->parsed()) return cmd_energy(common, axis, grid, command_line);
    if (converge->parsed()) return cmd_converge(common, k_values, command_line);
    std::cerr << "no subcommand given\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalError;
  }
}

}  // namespace tmres
