// geometry.hpp — resonator chain geometry.
#pragma once

#include <cstddef>
#include <vector>

namespace tmres {

/// A chain of N disjoint intervals (x_i^-, x_i^+) on the line, stored as the
/// strictly increasing list of their 2N boundary points. Immutable after
/// construction.
class ResonatorArray {
 public:
  /// Validates strict ordering of the boundary points (which implies
  /// positive lengths and positive gaps). Throws ConfigError otherwise.
  static ResonatorArray from_boundaries(std::vector<double> boundaries);

  std::size_t size() const { return boundaries_.size() / 2; }
  double left(std::size_t i) const { return boundaries_[2 * i]; }
  double right(std::size_t i) const { return boundaries_[2 * i + 1]; }
  double length(std::size_t i) const { return right(i) - left(i); }
  /// Gap between resonators i and i+1, for i in [0, N-2].
  double gap(std::size_t i) const { return left(i + 1) - right(i); }
  const std::vector<double>& boundaries() const { return boundaries_; }

  bool contains(double x) const;          // inside any open resonator interval
  /// Index of the resonator whose open interval contains x; size() if none.
  std::size_t resonator_at(double x) const;

 private:
  explicit ResonatorArray(std::vector<double> b) : boundaries_(std::move(b)) {}
  std::vector<double> boundaries_;
};

/// Evenly spaced chain: n resonators of equal `length`, separated by `gap`,
/// first boundary at `origin`. `gap` is ignored for n = 1.
ResonatorArray uniform_array(std::size_t n, double length, double gap, double origin = 0.0);

}  // namespace tmres
