// SPDX-License-Identifier: Apache-2.0
#include "risbeam/field_model.hpp"

#include <cmath>

#include "risbeam/common.hpp"
#include "risbeam/errors.hpp"

namespace risbeam {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};
// Path lengths below a nanometer mean the point sits on a unit.
constexpr double kMinPath = 1e-9;
}

Eigen::VectorXcd unit_phases(const Eigen::VectorXd& omega) {
  Eigen::VectorXcd x(omega.size());
  for (Eigen::Index n = 0; n < omega.size(); ++n) {
    x[n] = std::polar(1.0, omega[n]);
  }
  return x;
}

double QuadraticForm::power_at(const Eigen::VectorXd& omega) const {
  return power(unit_phases(omega));
}

ChannelVector channel_vector(const UnitGrid& grid,
                             const std::vector<SourceSpec>& sources,
                             const ObservationPoint& observation,
                             double wavelength_m, double unit_gain,
                             PropagationMode mode) {
  if (!(wavelength_m > 0.0)) throw ConfigError("channel_vector: wavelength must be positive");
  if (grid.size() == 0) throw ConfigError("channel_vector: empty grid");
  const double k = kTwoPi / wavelength_m;
  const Eigen::Vector3d obs =
      observation_position(observation.range_m, observation.theta_deg, observation.phi_deg);

  // Transmit-side per-unit factor, exact spherical in both modes.
  Eigen::VectorXcd tx = Eigen::VectorXcd::Zero(grid.size());
  for (const SourceSpec& src : sources) {
    const Eigen::Vector3d s = source_position(src.range_m, src.theta_deg, src.phi_deg);
    for (Eigen::Index n = 0; n < grid.size(); ++n) {
      const double rt = (grid.positions[n] - s).norm();
      if (rt <= 0.0) throw GeometryError("channel_vector: source coincides with a unit");
      tx[n] += src.field_amplitude * std::exp(-kJ * (k * rt)) / rt;
    }
  }

  ChannelVector out;
  out.at = observation;
  out.h.resize(grid.size());
  if (mode == PropagationMode::kSpherical) {
    for (Eigen::Index n = 0; n < grid.size(); ++n) {
      const double rr = (grid.positions[n] - obs).norm();
      if (rr <= 0.0) throw GeometryError("channel_vector: observation coincides with a unit");
      out.h[n] = unit_gain * tx[n] * std::exp(-kJ * (k * rr)) / rr;
    }
  } else {
    const double rr = obs.norm();
    if (rr <= 0.0) throw GeometryError("channel_vector: observation at the array center");
    const Eigen::Vector3d u =
        direction_vector(deg2rad(observation.theta_deg), deg2rad(observation.phi_deg));
    const std::complex<double> common = std::exp(-kJ * (k * rr)) / rr;
    for (Eigen::Index n = 0; n < grid.size(); ++n) {
      out.h[n] = unit_gain * tx[n] * common * std::exp(kJ * (k * grid.positions[n].dot(u)));
    }
  }
  if (!out.h.allFinite()) throw NumericError("channel_vector: non-finite channel entries");
  return out;
}

QuadraticForm quadratic_form(const ChannelVector& channel, double weight) {
  if (!(weight > 0.0)) throw ConfigError("quadratic_form: weight must be positive");
  QuadraticForm form;
  form.factor = channel.h;
  form.scale = 1.0 / weight;
  return form;
}

std::vector<ConstraintPoint> discretize_suppression(const SuppressionRegion& region) {
  if (region.theta_max_deg < region.theta_min_deg ||
      region.phi_max_deg < region.phi_min_deg) {
    throw ConfigError("discretize_suppression: region bounds out of order");
  }
  if (!(region.sample_spacing_deg > 0.0)) {
    throw ConfigError("discretize_suppression: sample_spacing must be positive");
  }
  auto axis_count = [&](double lo, double hi) {
    return 1 + static_cast<int>(std::floor((hi - lo) / region.sample_spacing_deg + 1e-9));
  };
  const int nt = axis_count(region.theta_min_deg, region.theta_max_deg);
  const int np = axis_count(region.phi_min_deg, region.phi_max_deg);
  if (nt < 1 || np < 1) throw ConfigError("discretize_suppression: empty region");

  std::vector<ConstraintPoint> points;
  points.reserve(static_cast<std::size_t>(nt) * np);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      ConstraintPoint p;
      p.at.range_m = region.range_m;
      p.at.theta_deg = region.theta_min_deg + i * region.sample_spacing_deg;
      p.at.phi_deg = region.phi_min_deg + j * region.sample_spacing_deg;
      p.threshold_w = region.threshold_w;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace risbeam
