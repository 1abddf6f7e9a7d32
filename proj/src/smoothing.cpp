// SPDX-License-Identifier: Apache-2.0
#include "risbeam/smoothing.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "risbeam/errors.hpp"

namespace risbeam {

namespace {

void require_finite(const Eigen::VectorXd& y, const char* what) {
  if (!y.allFinite()) throw NumericError(std::string(what) + ": non-finite input");
}

// Threshold tau such that sum(max(y_i - tau, 0)) = 1, assuming
// sum(max(y_i, 0)) >= 1. Ties in the sort are broken by value order only;
// the projection is unique regardless.
double simplex_threshold(const Eigen::VectorXd& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    prefix += u[i];
    const double cand = (prefix - 1.0) / static_cast<double>(i + 1);
    if (u[i] - cand > 0.0) tau = cand;
  }
  return tau;
}

}  // namespace

Eigen::VectorXd project_standard_simplex(const Eigen::VectorXd& y) {
  require_finite(y, "project_standard_simplex");
  if (y.size() == 0) throw NumericError("project_standard_simplex: empty vector");
  const double tau = simplex_threshold(y);
  return (y.array() - tau).max(0.0).matrix();
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  require_finite(y, "project_simplex");
  Eigen::VectorXd clamped = y.cwiseMax(0.0);
  // The slack absorbs the rounding in a thresholded result's sum, which keeps
  // re-projection the exact identity.
  if (clamped.sum() <= 1.0 + 1e-12) return clamped;
  // Thresholding the clamped vector equals thresholding y: tau > 0 here, so
  // non-positive entries map to zero either way.
  return project_standard_simplex(clamped);
}

SmoothMaxEval smooth_max(const Eigen::VectorXd& y, double lambda) {
  require_finite(y, "smooth_max");
  if (!(lambda > 0.0)) throw NumericError("smooth_max: lambda must be positive");
  SmoothMaxEval out;
  out.weights = project_standard_simplex(2.0 * lambda * y);
  out.value = out.weights.dot(y) - out.weights.squaredNorm() / (4.0 * lambda) +
              1.0 / (4.0 * lambda);
  return out;
}

Eigen::VectorXd smooth_max_gradient(const Eigen::VectorXd& y, double lambda) {
  require_finite(y, "smooth_max_gradient");
  if (!(lambda > 0.0)) throw NumericError("smooth_max_gradient: lambda must be positive");
  return project_standard_simplex(2.0 * lambda * y);
}

}  // namespace risbeam
