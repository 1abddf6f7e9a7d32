// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

namespace risbeam {

// Planar array of unit positions on the z = 0 plane, centroid at the origin.
struct UnitGrid {
  std::vector<Eigen::Vector3d> positions;
  Eigen::Index size() const { return static_cast<Eigen::Index>(positions.size()); }
};

// Centered rectangular lattice, rows along y, columns along x.
UnitGrid build_grid(int rows, int cols, double spacing_m);

// u(theta, phi) = [sin t cos p, sin t sin p, cos t]^T
Eigen::Vector3d direction_vector(double theta_rad, double phi_rad);

// Receivers live on the forward (z > 0) hemisphere.
Eigen::Vector3d observation_position(double range_m, double theta_deg, double phi_deg);

// Sources sit behind the surface; the z component is mirrored. Distances to
// the z = 0 plane are unchanged by the mirroring.
Eigen::Vector3d source_position(double range_m, double theta_deg, double phi_deg);

}  // namespace risbeam
