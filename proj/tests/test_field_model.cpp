// SPDX-License-Identifier: Apache-2.0
#include "risbeam/field_model.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

#include "risbeam/common.hpp"
#include "risbeam/errors.hpp"
#include "risbeam/geometry.hpp"

using namespace risbeam;

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};

Eigen::VectorXd omega_of(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("build_grid centers the lattice") {
  const UnitGrid two = build_grid(1, 2, 0.04);
  REQUIRE(two.size() == 2);
  CHECK(two.positions[0].isApprox(Eigen::Vector3d(-0.02, 0.0, 0.0)));
  CHECK(two.positions[1].isApprox(Eigen::Vector3d(0.02, 0.0, 0.0)));

  const UnitGrid linear = build_grid(1, 16, 0.025);
  CHECK(linear.positions.front().x() == doctest::Approx(-0.1875).epsilon(1e-15));

  const UnitGrid planar = build_grid(16, 16, 0.025);
  REQUIRE(planar.size() == 256);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : planar.positions) centroid += p;
  centroid /= 256.0;
  CHECK(centroid.norm() < 1e-14);
  // adjacent spacing along each axis
  CHECK((planar.positions[1] - planar.positions[0]).norm() == doctest::Approx(0.025));
  CHECK((planar.positions[16] - planar.positions[0]).norm() == doctest::Approx(0.025));
}

TEST_CASE("build_grid rejects degenerate input") {
  CHECK_THROWS_AS(build_grid(0, 4, 0.025), ConfigError);
  CHECK_THROWS_AS(build_grid(4, 0, 0.025), ConfigError);
  CHECK_THROWS_AS(build_grid(4, 4, 0.0), ConfigError);
}

TEST_CASE("channel_vector single-unit closed form") {
  const UnitGrid grid = build_grid(1, 1, 0.025);
  const double lambda = 0.0517;
  const SourceSpec src{2.0, 0.0, 0.0, 1.0};
  const ObservationPoint obs{3.0, 0.0, 0.0};
  const ChannelVector ch = channel_vector(grid, {src}, obs, lambda, 1.0,
                                          PropagationMode::kSpherical);
  REQUIRE(ch.h.size() == 1);
  const std::complex<double> expected =
      std::exp(-kJ * (kTwoPi * (2.0 + 3.0) / lambda)) / (2.0 * 3.0);
  CHECK(std::abs(ch.h[0] - expected) < 1e-15);
}

TEST_CASE("channel_vector mirror symmetry on the axis") {
  const UnitGrid grid = build_grid(1, 2, 0.025);
  const ChannelVector ch =
      channel_vector(grid, {{5.0, 0.0, 0.0, 1.0}}, {30.0, 0.0, 0.0}, 0.0517, 1.0,
                     PropagationMode::kSpherical);
  CHECK(std::abs(ch.h[0] - ch.h[1]) < 1e-18);
}

TEST_CASE("far-field magnitudes are uniform for the reference geometry") {
  // Tx1 at (5 m, 0, 0), UE broadside at 30 m, 1x16 linear array: transmit-side
  // distance spread is the only magnitude variation.
  const UnitGrid grid = build_grid(1, 16, 0.025);
  const ChannelVector ch =
      channel_vector(grid, {{5.0, 0.0, 0.0, 1.0}}, {30.0, 0.0, 0.0}, 0.0517, 1.0,
                     PropagationMode::kFarField);
  const Eigen::VectorXd mags = ch.h.cwiseAbs();
  // independent amplitude oracle: per-unit transmit distance, common receive factor
  for (Eigen::Index n = 0; n < 16; ++n) {
    const double rt = (grid.positions[n] - Eigen::Vector3d(0, 0, -5.0)).norm();
    CHECK(mags[n] == doctest::Approx(1.0 / (rt * 30.0)).epsilon(1e-12));
  }
  CHECK((mags.maxCoeff() - mags.minCoeff()) / mags.maxCoeff() < 0.005);
}

TEST_CASE("far-field mode converges to spherical at large range") {
  const UnitGrid grid = build_grid(1, 16, 0.025);
  const double lambda = 0.0517;
  const double aperture = 15 * 0.025;
  const double range = 1e3 * aperture * aperture / lambda;
  const SourceSpec src{5.0, 0.0, 0.0, 1.0};
  const ObservationPoint obs{range, 25.0, 0.0};
  const ChannelVector sph =
      channel_vector(grid, {src}, obs, lambda, 1.0, PropagationMode::kSpherical);
  const ChannelVector far =
      channel_vector(grid, {src}, obs, lambda, 1.0, PropagationMode::kFarField);
  for (Eigen::Index n = 0; n < 16; ++n) {
    const double dphase = std::abs(std::arg(sph.h[n] / far.h[n]));
    CHECK(dphase < 1e-3);
  }
}

TEST_CASE("channel_vector rejects coincident geometry") {
  const UnitGrid grid = build_grid(1, 2, 0.025);
  CHECK_THROWS_AS(channel_vector(grid, {{5.0, 0.0, 0.0, 1.0}},
                                 {0.0125, 0.0, 90.0 - 1e-9},  // on a unit, in plane
                                 0.0517, 1.0, PropagationMode::kSpherical),
                  GeometryError);
}

TEST_CASE("quadratic_form evaluation contract") {
  ChannelVector ch;
  ch.h = Eigen::VectorXcd(2);

  ch.h << 1.0, 1.0;
  const QuadraticForm coherent = quadratic_form(ch, 1.0);
  CHECK(coherent.power_at(omega_of({0.0, 0.0})) == doctest::Approx(4.0));
  CHECK(coherent.power_at(omega_of({0.0, std::numbers::pi})) ==
        doctest::Approx(0.0).epsilon(1e-30));

  ch.h << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0);
  const QuadraticForm halved = quadratic_form(ch, 2.0);  // scale = 1/2
  CHECK(halved.power_at(omega_of({0.0, 0.0})) == doctest::Approx(1.0));
}

TEST_CASE("quadratic_form matches the dense Hermitian evaluation") {
  // Dual route: rank-1 contract s*|h^T x|^2 against w^H (s h h^H) w with the
  // convention w = conj(exp(j omega)).
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_u64() % 6);
    Eigen::VectorXcd h(n);
    Eigen::VectorXd omega(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      h[i] = std::complex<double>(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
      omega[i] = rng.uniform_phase();
    }
    ChannelVector ch;
    ch.h = h;
    const double weight = 0.5 + 2.0 * rng.uniform01();
    const QuadraticForm form = quadratic_form(ch, weight);

    const Eigen::MatrixXcd dense = (1.0 / weight) * (h * h.adjoint());
    const Eigen::VectorXcd w = unit_phases(omega).conjugate();
    const std::complex<double> quad = w.adjoint() * dense * w;
    CHECK(std::abs(quad.imag()) < 1e-12 * std::abs(quad.real() + 1e-30));
    CHECK(form.power_at(omega) == doctest::Approx(quad.real()).epsilon(1e-12));
    CHECK(form.power_at(omega) >= 0.0);
  }
}

TEST_CASE("coherent bound and MRC alignment") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 6);
    ChannelVector ch;
    ch.h.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ch.h[i] = std::polar(0.2 + rng.uniform01(), rng.uniform_phase());
    }
    const QuadraticForm form = quadratic_form(ch, 1.0);
    Eigen::VectorXd mrc(n);
    for (Eigen::Index i = 0; i < n; ++i) mrc[i] = -std::arg(ch.h[i]);
    const double bound = form.coherent_bound();
    CHECK(form.power_at(mrc) == doctest::Approx(bound).epsilon(1e-9));

    Eigen::VectorXd random_omega(n);
    for (Eigen::Index i = 0; i < n; ++i) random_omega[i] = rng.uniform_phase();
    CHECK(form.power_at(random_omega) <= bound * (1.0 + 1e-12));
    // global phase invariance
    const double shift = rng.uniform_phase();
    const Eigen::VectorXd shifted = random_omega.array() + shift;
    CHECK(form.power_at(shifted) ==
          doctest::Approx(form.power_at(random_omega)).epsilon(1e-12));
  }
}

TEST_CASE("discretize_suppression inclusive grids") {
  SuppressionRegion region;
  region.range_m = 30.0;
  region.threshold_w = 1e-6;
  region.sample_spacing_deg = 1.0;

  region.theta_min_deg = -10.0;
  region.theta_max_deg = 0.0;
  region.phi_min_deg = region.phi_max_deg = 0.0;
  CHECK(discretize_suppression(region).size() == 11);

  region.theta_min_deg = 0.0;
  region.theta_max_deg = 20.0;
  region.phi_min_deg = 179.0;
  region.phi_max_deg = 181.0;
  const auto points = discretize_suppression(region);
  CHECK(points.size() == 63);
  for (const auto& p : points) CHECK(p.threshold_w == 1e-6);

  region.theta_min_deg = region.theta_max_deg = 5.0;
  region.phi_min_deg = region.phi_max_deg = 0.0;
  CHECK(discretize_suppression(region).size() == 1);
}

TEST_CASE("discretize_suppression rejects bad regions") {
  SuppressionRegion region;
  region.range_m = 30.0;
  region.threshold_w = 1e-6;
  region.theta_min_deg = 5.0;
  region.theta_max_deg = -5.0;  // reversed
  CHECK_THROWS_AS(discretize_suppression(region), ConfigError);
  region.theta_max_deg = 10.0;
  region.sample_spacing_deg = 0.0;
  CHECK_THROWS_AS(discretize_suppression(region), ConfigError);
}
