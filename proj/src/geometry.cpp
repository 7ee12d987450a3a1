#include "tmres/geometry.hpp"

#include <sstream>

#include "tmres/errors.hpp"

namespace tmres {

ResonatorArray ResonatorArray::from_boundaries(std::vector<double> boundaries) {
  if (boundaries.size() < 2 || boundaries.size() % 2 != 0) {
    throw ConfigError("geometry: need an even, nonzero number of boundary points, got " +
                      std::to_string(boundaries.size()));
  }
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    if (!(boundaries[i] < boundaries[i + 1])) {
      std::ostringstream msg;
      msg << "geometry: boundary points must be strictly increasing; points " << i << " and "
          << i + 1 << " are " << boundaries[i] << ", " << boundaries[i + 1];
      throw ConfigError(msg.str());
    }
  }
  return ResonatorArray(std::move(boundaries));
}

bool ResonatorArray::contains(double x) const { return resonator_at(x) < size(); }

std::size_t ResonatorArray::resonator_at(double x) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (left(i) < x && x < right(i)) return i;
  }
  return size();
}

ResonatorArray uniform_array(std::size_t n, double length, double gap, double origin) {
  if (n < 1) throw ConfigError("uniform geometry: need at least one resonator");
  if (!(length > 0.0)) throw ConfigError("uniform geometry: length must be positive");
  if (n >= 2 && !(gap > 0.0)) throw ConfigError("uniform geometry: gap must be positive");
  std::vector<double> b;
  b.reserve(2 * n);
  double x = origin;
  for (std::size_t i = 0; i < n; ++i) {
    b.push_back(x);
    b.push_back(x + length);
    x += length + gap;
  }
  return ResonatorArray::from_boundaries(std::move(b));
}

}  // namespace tmres
