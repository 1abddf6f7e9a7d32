// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "risbeam/geometry.hpp"

namespace risbeam {

enum class PropagationMode { kSpherical, kFarField };

struct SourceSpec {
  double range_m = 0.0;
  double theta_deg = 0.0;  // elevation in [0, 90)
  double phi_deg = 0.0;
  double field_amplitude = 1.0;  // V/m at unit distance reference
};

struct ObservationPoint {
  double range_m = 0.0;
  double theta_deg = 0.0;  // signed elevation, |theta| < 90 (forward hemisphere)
  double phi_deg = 0.0;
};

// Complex per-unit channel h for one observation point. Received field is
// h^T exp(j*Omega); received power |h^T exp(j*Omega)|^2.
struct ChannelVector {
  Eigen::VectorXcd h;
  ObservationPoint at;
};

// Entry n:  g * sum_m E_m * exp(-j2pi rt_m(n)/lambda)/rt_m(n)
//                        * exp(-j2pi rr(n)/lambda)/rr(n)
// with exact per-unit distances on both sides in spherical mode. Far-field
// mode replaces the receive-side per-unit term by the common factor
// exp(-j2pi rr/lambda)/rr times the plane-wave phase exp(+j2pi p_n.u/lambda);
// the transmit side stays exact in both modes.
ChannelVector channel_vector(const UnitGrid& grid,
                             const std::vector<SourceSpec>& sources,
                             const ObservationPoint& observation,
                             double wavelength_m, double unit_gain,
                             PropagationMode mode);

// Rank-1 Hermitian form stored by its factor vector: evaluation contract is
// P(x) = scale * |factor^T x|^2 for unit-modulus x. The N x N matrix is never
// materialized; evaluation and gradients cost O(N).
struct QuadraticForm {
  Eigen::VectorXcd factor;
  double scale = 1.0;

  std::complex<double> response(const Eigen::VectorXcd& x) const {
    return factor.transpose() * x;  // plain sum, no conjugation
  }
  double power(const Eigen::VectorXcd& x) const {
    return scale * std::norm(response(x));
  }
  double power_at(const Eigen::VectorXd& omega) const;
  // scale * (sum |factor_n|)^2: attained by phase alignment (MRC).
  double coherent_bound() const {
    const double s = factor.cwiseAbs().sum();
    return scale * s * s;
  }
};

// scale = 1/weight: user forms pass the fairness weight alpha_k, constraint
// forms pass 1.
QuadraticForm quadratic_form(const ChannelVector& channel, double weight);

struct SuppressionRegion {
  double theta_min_deg = 0.0, theta_max_deg = 0.0;
  double phi_min_deg = 0.0, phi_max_deg = 0.0;
  double range_m = 0.0;
  double sample_spacing_deg = 1.0;
  double threshold_w = 0.0;  // sigma_q
};

struct ConstraintPoint {
  ObservationPoint at;
  double threshold_w = 0.0;
};

// Inclusive (theta, phi) grid at sample_spacing, each sample paired with the
// region threshold.
std::vector<ConstraintPoint> discretize_suppression(const SuppressionRegion& region);

Eigen::VectorXcd unit_phases(const Eigen::VectorXd& omega);  // exp(j*omega)

}  // namespace risbeam
