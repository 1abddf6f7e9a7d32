// SPDX-License-Identifier: Apache-2.0
#include "risbeam/smoothing.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

#include "risbeam/common.hpp"
#include "risbeam/errors.hpp"

using risbeam::project_simplex;
using risbeam::project_standard_simplex;
using risbeam::Rng;
using risbeam::smooth_max;
using risbeam::smooth_max_gradient;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Independent projection oracle for {x >= 0, sum <= 1}: solves the KKT
// threshold equation sum(max(y - tau, 0)) = 1 by bisection on tau instead of
// sorting.
Eigen::VectorXd oracle_project(const Eigen::VectorXd& y) {
  Eigen::VectorXd clamped = y.cwiseMax(0.0);
  if (clamped.sum() <= 1.0) return clamped;
  double lo = 0.0, hi = y.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    const double s = (y.array() - tau).max(0.0).sum();
    (s > 1.0 ? lo : hi) = tau;
  }
  const double tau = 0.5 * (lo + hi);
  return (y.array() - tau).max(0.0).matrix();
}

Eigen::VectorXd random_vec(Rng& rng, Eigen::Index m, double scale) {
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = scale * (2.0 * rng.uniform01() - 1.0);
  return y;
}

}  // namespace

TEST_CASE("project_simplex matches the spec examples") {
  CHECK(project_simplex(vec({0.2, 0.3})).isApprox(vec({0.2, 0.3})));
  CHECK(project_simplex(vec({2.0, 0.0})).isApprox(vec({1.0, 0.0})));
  CHECK(project_simplex(vec({1.0, 1.0})).isApprox(vec({0.5, 0.5})));
  CHECK(project_simplex(vec({-3.0, -1.0})).isApprox(vec({0.0, 0.0})));
}

TEST_CASE("project_simplex agrees with the KKT bisection oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.next_u64() % 8);
    const Eigen::VectorXd y = random_vec(rng, m, 3.0);
    const Eigen::VectorXd p = project_simplex(y);
    const Eigen::VectorXd q = oracle_project(y);
    CHECK((p - q).lpNorm<Eigen::Infinity>() < 1e-10);
    // feasibility
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() <= 1.0 + 1e-12);
    // idempotence
    CHECK((project_simplex(p) - p).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("project_simplex is the nearest feasible point") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
    const Eigen::VectorXd y = random_vec(rng, m, 2.0);
    const Eigen::VectorXd p = project_simplex(y);
    const double d_p = (y - p).squaredNorm();
    for (int probe = 0; probe < 100; ++probe) {
      // random feasible point: dirichlet-ish draw scaled to sum <= 1
      Eigen::VectorXd x(m);
      for (Eigen::Index i = 0; i < m; ++i) x[i] = rng.uniform01();
      x *= rng.uniform01() / std::max(x.sum(), 1e-12);
      CHECK(d_p <= (y - x).squaredNorm() + 1e-12);
    }
  }
}

TEST_CASE("project_simplex rejects non-finite input") {
  Eigen::VectorXd y = vec({1.0, 0.0});
  y[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(project_simplex(y), risbeam::NumericError);
}

TEST_CASE("smooth_max closed-form values") {
  // Projection of 2*lambda*y lands on the vertex (1, 0): value is exact.
  const auto ev = smooth_max(vec({1.0, 0.0}), 10.0);
  CHECK(ev.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev.weights.isApprox(vec({1.0, 0.0})));

  // At the origin the standard-simplex projection is uniform; the value is
  // ||p||^2-corrected, not the bare 1/(4*lambda) constant.
  const auto ev0 = smooth_max(vec({0.0, 0.0}), 5.0);
  CHECK(ev0.weights.isApprox(vec({0.5, 0.5})));
  CHECK(ev0.value == doctest::Approx(0.5 * 0.0 - 0.5 / 20.0 + 1.0 / 20.0).epsilon(1e-14));
  CHECK(ev0.value == doctest::Approx(0.025));
  // sandwich holds there: max(y) = 0 <= 0.025 <= 1/(4*5)
  CHECK(ev0.value >= 0.0);
  CHECK(ev0.value <= 0.05);
}

TEST_CASE("smooth_max sandwich bound on random vectors") {
  Rng rng(1);
  for (double lambda : {0.5, 1.0, 10.0, 100.0}) {
    const double gap = 1.0 / (4.0 * lambda);
    for (int trial = 0; trial < 2000; ++trial) {
      const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
      const Eigen::VectorXd y = random_vec(rng, m, 5.0);
      const double v = smooth_max(y, lambda).value;
      CHECK(v - y.maxCoeff() >= -1e-12);
      CHECK(v - y.maxCoeff() <= gap + 1e-12);
    }
  }
}

TEST_CASE("smooth_max tightens monotonically in lambda") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
    const Eigen::VectorXd y = random_vec(rng, m, 3.0);
    const double lambda = 0.5 + 5.0 * rng.uniform01();
    const double gap1 = smooth_max(y, lambda).value - y.maxCoeff();
    const double gap2 = smooth_max(y, 2.0 * lambda).value - y.maxCoeff();
    CHECK(gap2 <= gap1 + 1e-12);
  }
}

TEST_CASE("smooth_max_gradient equals the weights and passes finite differences") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
    const Eigen::VectorXd y = random_vec(rng, m, 2.0);
    const double lambda = 0.5 + 4.0 * rng.uniform01();
    const Eigen::VectorXd g = smooth_max_gradient(y, lambda);
    CHECK(g.isApprox(smooth_max(y, lambda).weights));

    const double step = 1e-6 * std::max(1.0, y.norm());
    Eigen::VectorXd fd(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd hi = y, lo = y;
      hi[i] += step;
      lo[i] -= step;
      fd[i] = (smooth_max(hi, lambda).value - smooth_max(lo, lambda).value) / (2.0 * step);
    }
    const double denom = std::max(fd.norm(), 1e-12);
    CHECK((g - fd).norm() / denom < 1e-5);
  }
}

TEST_CASE("smooth_max gradient is 2-lambda Lipschitz") {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.next_u64() % 7);
    const double lambda = 0.25 + 10.0 * rng.uniform01();
    const Eigen::VectorXd y1 = random_vec(rng, m, 3.0);
    const Eigen::VectorXd y2 = random_vec(rng, m, 3.0);
    const double num = (smooth_max_gradient(y1, lambda) - smooth_max_gradient(y2, lambda)).norm();
    CHECK(num <= 2.0 * lambda * (y1 - y2).norm() + 1e-12);
  }
}

TEST_CASE("smooth_max gradient at vertex-dominant input") {
  const Eigen::VectorXd g = smooth_max_gradient(vec({1.0, 0.0}), 1000.0);
  CHECK(g.isApprox(vec({1.0, 0.0})));
}

TEST_CASE("smooth_max rejects bad lambda") {
  CHECK_THROWS_AS(smooth_max(vec({1.0, 0.0}), 0.0), risbeam::NumericError);
  CHECK_THROWS_AS(smooth_max(vec({1.0, 0.0}), -1.0), risbeam::NumericError);
}
