// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace risbeam {

// Euclidean projection onto the unit simplex {x >= 0, sum(x) <= 1}.
// Two stages: clamp negatives, then (only if the clamped sum exceeds 1)
// project onto the standard simplex via sort-and-threshold.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y);

// Euclidean projection onto the standard simplex {x >= 0, sum(x) = 1},
// sort-and-threshold, O(m log m).
Eigen::VectorXd project_standard_simplex(const Eigen::VectorXd& y);

struct SmoothMaxEval {
  double value = 0.0;
  Eigen::VectorXd weights;  // gradient wrt y; lies in the standard simplex
};

// Compensated-convexity upper transform of the coordinate maximum:
//
//   C_lambda(y) = lambda*||y||^2 - ||2*lambda*y - p||^2 / (4*lambda) + 1/(4*lambda),
//   p = projection of 2*lambda*y onto the standard simplex.
//
// Evaluated in the algebraically equal but better-conditioned form
// p.y - ||p||^2/(4*lambda) + 1/(4*lambda). Satisfies, for every y,
//   max(y) <= C_lambda(y) <= max(y) + 1/(4*lambda),
// and the gradient p is 2*lambda-Lipschitz in y. The projection target must
// be the standard simplex (sum = 1): its support function is exactly max_i y_i,
// which is what makes the bound uniform and lets the bisection drive the
// smoothed value below -1/(4*lambda).
SmoothMaxEval smooth_max(const Eigen::VectorXd& y, double lambda);

// The weights field of smooth_max, without the value.
Eigen::VectorXd smooth_max_gradient(const Eigen::VectorXd& y, double lambda);

}  // namespace risbeam
