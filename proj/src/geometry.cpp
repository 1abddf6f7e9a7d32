// SPDX-License-Identifier: Apache-2.0
#include "risbeam/geometry.hpp"

#include <cmath>

#include "risbeam/common.hpp"
#include "risbeam/errors.hpp"

namespace risbeam {

UnitGrid build_grid(int rows, int cols, double spacing_m) {
  if (rows < 1 || cols < 1) throw ConfigError("build_grid: rows and cols must be >= 1");
  if (!(spacing_m > 0.0)) throw ConfigError("build_grid: spacing must be positive");
  UnitGrid grid;
  grid.positions.reserve(static_cast<std::size_t>(rows) * cols);
  const double x0 = -0.5 * (cols - 1) * spacing_m;
  const double y0 = -0.5 * (rows - 1) * spacing_m;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      grid.positions.emplace_back(x0 + c * spacing_m, y0 + r * spacing_m, 0.0);
    }
  }
  return grid;
}

Eigen::Vector3d direction_vector(double theta_rad, double phi_rad) {
  const double st = std::sin(theta_rad);
  return {st * std::cos(phi_rad), st * std::sin(phi_rad), std::cos(theta_rad)};
}

Eigen::Vector3d observation_position(double range_m, double theta_deg, double phi_deg) {
  return range_m * direction_vector(deg2rad(theta_deg), deg2rad(phi_deg));
}

Eigen::Vector3d source_position(double range_m, double theta_deg, double phi_deg) {
  Eigen::Vector3d p = range_m * direction_vector(deg2rad(theta_deg), deg2rad(phi_deg));
  p.z() = -p.z();
  return p;
}

}  // namespace risbeam
