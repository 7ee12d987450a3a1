// Acceptance suite: end-to-end checks of the solver chain, one line per
// criterion. Exits nonzero if any criterion fails.
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tmres/config.hpp"
#include "tmres/energy.hpp"
#include "tmres/quasifreq.hpp"
#include "tmres/scattering.hpp"

using namespace tmres;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

Complex nonzero_branch(const QuasifrequencySet& set) {
  Complex best = set.values.front();
  for (Complex v : set.values) {
    if (std::abs(v.imag()) > std::abs(best.imag())) best = v;
  }
  return best;
}

Complex zero_branch(const QuasifrequencySet& set) {
  Complex best = set.values.front();
  for (Complex v : set.values) {
    if (std::abs(v) < std::abs(best)) best = v;
  }
  return best;
}

double rel_dist(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// 1. Static single-resonator resonance: three methods pairwise to 1e-4
//    relative; leading-order value to 5e-4; zero branch and purely imaginary
//    nonzero branch.
void criterion_1() {
  double worst_pair = 0.0, worst_lead = 0.0, worst_shape = 0.0;
  for (double length : {1.0, 2.0, 10.0}) {
    const SimulationConfig cfg = with_resonator_length(reference_config(1, 0.0, 0.0), length);
    const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
    const Complex w_floquet = nonzero_branch(floquet);
    const Complex w_closed = nonzero_branch(closed_form_single(cfg));
    const Complex w_detroot = nonzero_branch(det_root_quasifrequencies(cfg));

    worst_pair = std::max({worst_pair, rel_dist(w_floquet, w_closed),
                           rel_dist(w_floquet, w_detroot), rel_dist(w_closed, w_detroot)});
    const Complex leading{0.0, -2.0 * 1e-4 / length};  // -2 i v_in^2 delta / (l v_out)
    worst_lead = std::max(worst_lead, rel_dist(w_floquet, leading));
    worst_shape = std::max({worst_shape, std::abs(zero_branch(floquet)),
                            std::abs(w_floquet.real())});
  }
  std::ostringstream detail;
  detail << "pairwise " << worst_pair << ", leading " << worst_lead << ", shape " << worst_shape;
  report(1, "static single-resonator resonance", worst_pair <= 1e-4 && worst_lead <= 5e-4 &&
                                                     worst_shape <= 1e-10,
         detail.str());
}

// 2. Modulated single-resonator closed form to 1e-3 relative; Im strictly
//    decreasing in eps.
void criterion_2() {
  double worst = 0.0;
  bool decreasing = true;
  double previous = nonzero_branch(floquet_quasifrequencies(reference_config(1, 0.0, 0.0))).imag();
  for (double eps : {0.1, 0.3, 0.6, 0.9}) {
    const Complex w1 = nonzero_branch(floquet_quasifrequencies(reference_config(1, eps, 0.0)));
    const Complex closed = Complex{0.0, -1e-4} / std::sqrt(1.0 - eps * eps);
    worst = std::max(worst, rel_dist(w1, closed));
    decreasing = decreasing && (w1.imag() < previous);
    previous = w1.imag();
  }
  std::ostringstream detail;
  detail << "max rel " << worst << ", strictly decreasing " << (decreasing ? "yes" : "no");
  report(2, "modulated single-resonator closed form", worst <= 1e-3 && decreasing, detail.str());
}

// 3. |Im w1| = O(1/l): log-log slope -1 +- 0.01 for eps in {0, 0.6}.
void criterion_3() {
  double worst = 0.0;
  for (double eps : {0.0, 0.6}) {
    std::vector<double> lx, ly;
    for (double length : {1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
      const SimulationConfig cfg =
          with_uniform_eps(with_resonator_length(reference_config(1, 0.0, 0.0), length), eps);
      lx.push_back(std::log(length));
      ly.push_back(std::log(std::abs(nonzero_branch(floquet_quasifrequencies(cfg)).imag())));
    }
    worst = std::max(worst, std::abs(testing::regression_slope(lx, ly) + 1.0));
  }
  std::ostringstream detail;
  detail << "max |slope + 1| = " << worst;
  report(3, "decay-length scaling law", worst <= 0.01, detail.str());
}

// 4. Static energy conservation at 10 operating frequencies per chain size.
void criterion_4() {
  double worst_flux = 0.0, worst_tail = 0.0;
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{6}}) {
    const SimulationConfig cfg = reference_config(n, 0.0, 0.0);
    const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
    double top_re = 0.0;
    for (Complex v : floquet.values) top_re = std::max(top_re, v.real());
    std::vector<double> omegas = {0.0011, 0.0023, 0.0052, 0.0071, 0.0093,
                                  0.0118, 0.0139, 0.0146};
    omegas.push_back(top_re + 1e-4);          // just above the highest marker
    omegas.push_back(top_re / 2.0 + 1.3e-4);  // inside the cluster
    for (double omega : omegas) {
      const ScatteringSolution sol = solve_scattering(cfg, Complex{omega, 0.0});
      const double flux = std::norm(sol.exterior.reflection_at(0)) +
                          std::norm(sol.exterior.transmission_at(0));
      worst_flux = std::max(worst_flux, std::abs(flux - 1.0));
      double tail = 0.0;
      for (int m = -4; m <= 4; ++m) {
        if (m == 0) continue;
        tail += std::norm(sol.exterior.reflection_at(m)) +
                std::norm(sol.exterior.transmission_at(m));
      }
      worst_tail = std::max(worst_tail, tail);
    }
  }
  std::ostringstream detail;
  detail << "max ||R0|^2+|T0|^2 - 1| = " << worst_flux << ", max off-mode flux = " << worst_tail;
  report(4, "static energy conservation", worst_flux <= 1e-8 && worst_tail < 1e-16, detail.str());
}

// 5. Closed-form capacitance equals the finite-difference oracle.
void criterion_5() {
  const std::vector<ResonatorArray> geometries = {
      uniform_array(1, 2.0, 1.0, 0.0),
      uniform_array(2, 2.0, 10.0, 0.0),
      ResonatorArray::from_boundaries({0, 2, 12, 14, 19, 21}),            // gaps 10, 5
      ResonatorArray::from_boundaries({0, 2, 9, 11, 23, 25, 31, 33, 40, 42, 55, 57}),
  };
  double worst = 0.0;
  for (const auto& array : geometries) {
    const CapacitanceMatrix closed = capacitance_matrix(array);
    const CapacitanceMatrix oracle = capacitance_oracle(array, 0.01);
    worst = std::max(worst, (closed.entries - oracle.entries).cwiseAbs().maxCoeff());
  }
  const CapacitanceMatrix single = capacitance_matrix(uniform_array(1, 2.0, 1.0, 0.0));
  const bool single_zero = single.size() == 1 && single.entries(0, 0) == 0.0;
  std::ostringstream detail;
  detail << "max |closed - oracle| = " << worst << ", single-resonator scalar "
         << single.entries(0, 0);
  report(5, "capacitance oracle equivalence", worst < 1e-10 && single_zero, detail.str());
}

// 6. Determinant roots track the Floquet exponents for multi-resonator chains.
void criterion_6() {
  double worst = 0.0;
  bool folded = true, counts = true, found_any = true;
  for (std::size_t n : {std::size_t{2}, std::size_t{6}}) {
    for (double eps : {0.0, 0.4, 0.9}) {
      const SimulationConfig cfg = reference_config(n, eps, 0.0);
      const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
      counts = counts && floquet.values.size() == 2 * n;
      const QuasifrequencySet roots = det_root_quasifrequencies(cfg);
      found_any = found_any && !roots.values.empty();
      for (Complex v : floquet.values) {
        folded = folded && v.real() >= -0.015 && v.real() < 0.015;
      }
      for (Complex r : roots.values) {
        folded = folded && r.real() >= -0.015 && r.real() < 0.015;
        double nearest = std::numeric_limits<double>::infinity();
        for (Complex f : floquet.values) nearest = std::min(nearest, std::abs(r - f));
        worst = std::max(worst, nearest);
      }
    }
  }
  std::ostringstream detail;
  detail << "max root-to-floquet distance " << worst << " (bound " << 10.0 * 1e-4 << ")";
  report(6, "cross-method quasifrequencies, N > 1",
         worst <= 10.0 * 1e-4 && folded && counts && found_any, detail.str());
}

// 7. Frequency-conversion spectrum decays strictly in the mode order.
void criterion_7() {
  const SimulationConfig cfg = reference_config(6, 0.9, 0.0);
  const QuasifrequencySet floquet = floquet_quasifrequencies(cfg);
  const double omega = floquet.values.back().real() + 0.03 / 50.0;
  const ModeScatteringTable table = mode_table(solve_scattering(cfg, Complex{omega, 0.0}));
  bool decreasing = true;
  for (int m = 1; m < 4; ++m) {
    decreasing = decreasing && table.cross_section_at(m) > table.cross_section_at(m + 1);
    decreasing = decreasing && table.cross_section_at(-m) > table.cross_section_at(-(m + 1));
  }
  const double tail = std::max(table.cross_section_at(4), table.cross_section_at(-4)) /
                      table.cross_section_at(0);
  std::ostringstream detail;
  detail << "strictly decreasing " << (decreasing ? "yes" : "no") << ", tail/center = " << tail;
  report(7, "frequency-conversion spectrum", decreasing && tail < 1e-4, detail.str());
}

// 8. Energy non-conservation under modulation, maximal near a marker.
void criterion_8() {
  const SimulationConfig base = reference_config(6, 0.6, 0.0);
  double conservation_error = 0.0;
  double max_deviation = 0.0;
  for (int step = 0; step <= 9; ++step) {
    const double eps = 0.1 * step;
    const SimulationConfig cfg = with_uniform_eps(base, eps);
    const double omega = floquet_quasifrequencies(cfg).values.back().real();
    const ModeScatteringTable table = mode_table(solve_scattering(cfg, Complex{omega, 0.0}));
    if (step == 0) {
      conservation_error = std::abs(table.total - 1.0);
    } else {
      max_deviation = std::max(max_deviation, std::abs(table.total - 1.0));
    }
  }

  // omega sweep at eps = 0.6: the largest deviation sits next to a marker
  std::vector<double> grid;
  for (int i = 0; i < 59; ++i) grid.push_back(0.0005 + (0.015 - 0.0005) * i / 58.0);
  const EnergySweep sweep = energy_sweep(base, SweepAxis::kOmega, grid);
  double best_dev = -1.0, marker_dist = std::numeric_limits<double>::infinity();
  for (const auto& row : sweep.rows) {
    if (!row.ok) continue;
    const double dev = std::abs(row.table.total - 1.0);
    if (dev > best_dev) {
      best_dev = dev;
      marker_dist = std::abs(row.axis_value - row.nearest_marker);
    }
  }
  std::ostringstream detail;
  detail << "|E(0)-1| = " << conservation_error << ", max|E-1| = " << max_deviation
         << ", peak-to-marker distance = " << marker_dist;
  report(8, "energy non-conservation under modulation",
         conservation_error <= 1e-8 && max_deviation > 1e-3 && marker_dist <= 0.03 / 10.0,
         detail.str());
}

// 9. Pole-pencil approximation against the direct solve.
void criterion_9() {
  const SimulationConfig cfg = reference_config(2, 0.4, 0.0);
  const QuasifrequencySet roots = det_root_quasifrequencies(cfg);
  Complex pole = roots.values.front();
  for (Complex v : roots.values) {
    if (std::abs(v.imag()) > std::abs(pole.imag())) pole = v;
  }
  const PolePencilData data = pole_pencil(cfg, pole);
  const PoleExpansion expansion(cfg, roots.values);
  const double probe = cfg.array.right(1) + 10.0;

  bool monotone = true;
  double at_ten = 0.0, previous = std::numeric_limits<double>::infinity();
  for (double mult : {10.0, 5.0, 2.0}) {
    const Complex omega = pole + mult * cfg.physical.delta;
    const Complex direct = solve_scattering(cfg, omega).scattered_field(probe, 0.0);
    const Complex approx = expansion.scattered_field(omega, probe, 0.0);
    const double rel = std::abs(approx - direct) / std::abs(direct);
    if (mult == 10.0) at_ten = rel;
    monotone = monotone && rel < previous;
    previous = rel;
  }
  std::ostringstream detail;
  detail << "rel at 10 delta = " << at_ten << ", monotone " << (monotone ? "yes" : "no")
         << ", null residuals " << data.right_residual << "/" << data.left_residual;
  report(9, "pole-pencil consistency",
         at_ten <= 0.2 && monotone && data.right_residual <= 1e-8 && data.left_residual <= 1e-8,
         detail.str());
}

// 10. Truncation convergence between mode cutoffs 4 and 6.
void criterion_10() {
  const SimulationConfig base = reference_config(6, 0.6, 0.0);
  const double omega = floquet_quasifrequencies(base).values.back().real() + 6e-4;
  double energies[2];
  std::vector<double> moduli[2];
  int idx = 0;
  for (int cutoff : {4, 6}) {
    const SimulationConfig cfg = with_incident_omega(with_mode_cutoff(base, cutoff), omega);
    const ModeScatteringTable table = mode_table(solve_scattering(cfg));
    energies[idx] = table.total;
    for (int m = -2; m <= 2; ++m) moduli[idx].push_back(std::abs(table.reflection_at(m)));
    ++idx;
  }
  const double d_energy = std::abs(energies[1] - energies[0]);
  double d_reflection = 0.0;
  for (std::size_t m = 0; m < moduli[0].size(); ++m) {
    d_reflection = std::max(d_reflection, std::abs(moduli[1][m] - moduli[0][m]));
  }
  std::ostringstream detail;
  detail << "|E(6)-E(4)| = " << d_energy << ", max ||R_n(6)|-|R_n(4)|| = " << d_reflection;
  report(10, "truncation convergence", d_energy < 1e-6 && d_reflection < 1e-6, detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
