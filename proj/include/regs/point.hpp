#pragma once

#include <array>
#include <cmath>

namespace regs {

// Coordinates beyond the working dimension are held at zero, so distances
// computed over all three slots are the d-dimensional ones.
using Point = std::array<double, 3>;

inline double distance_sq(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(distance_sq(a, b)); }

inline Point make_point(double x, double y = 0.0, double z = 0.0) { return {x, y, z}; }

}  // namespace regs
