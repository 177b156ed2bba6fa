#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "philab/error.hpp"
#include "philab/sampling.hpp"
#include "philab/sphere.hpp"

using namespace philab;

namespace {
constexpr double kPi = std::numbers::pi;
const PhiIntegrand norm2 = builtin::quadratic_phi(2, {1, 0, 0, 1});
}

TEST_CASE("rule weights sum to the surface measure") {
  for (int n : {16, 360, 4096}) {
    const auto r = SphereRule::circle(n);
    CHECK(std::abs(r.total_weight() - 2 * kPi) < 1e-10);
    for (const Vec& z : r.nodes()) CHECK(std::abs(z.norm() - 1.0) < 1e-14);
  }
  for (int n : {200, 4096}) {
    const auto r = SphereRule::for_dim(3, n);
    CHECK(std::abs(r.total_weight() - 4 * kPi) < 1e-10);
    double worst = 0.0;
    for (const Vec& z : r.nodes()) worst = std::max(worst, std::abs(z.norm() - 1.0));
    CHECK(worst < 1e-14);
    for (double w : r.weights()) CHECK(w > 0.0);
  }
}

TEST_CASE("polynomial moments") {
  const auto c = SphereRule::circle(64);
  CHECK(sphere_integral(2, [](const Vec& z) { return z[0] * z[0]; }, c) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(std::abs(sphere_integral(2, [](const Vec& z) { return z[0] * z[1] * z[1] * z[1]; }, c)) < 1e-15);
  const auto s = SphereRule::for_dim(3, 1024);
  // int z^2 = 4 pi / 3, int x^2 y^2 = 4 pi / 15
  CHECK(sphere_integral(3, [](const Vec& z) { return z[2] * z[2]; }, s) == doctest::Approx(4 * kPi / 3).epsilon(1e-13));
  CHECK(sphere_integral(3, [](const Vec& z) { return z[0] * z[0] * z[1] * z[1]; }, s) ==
        doctest::Approx(4 * kPi / 15).epsilon(1e-13));
  CHECK_THROWS_AS(sphere_integral(3, [](const Vec&) { return 1.0; }, c), ValidationError);
}

TEST_CASE("rotated rule keeps weights and puts the axis on a node") {
  const Vec axis = normalized(Vec{0.3, -0.8, 0.5});
  const auto r = SphereRule::product(16, 32).aligned_to(axis);
  CHECK(r.total_weight() == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(sphere_integral(3, [&](const Vec& z) { return std::pow(z[0] * axis[0] + z[1] * axis[1] + z[2] * axis[2], 2); },
                        r) == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("hemisphere functional closed forms") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto rule = SphereRule::circle(4096);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vec xi = random_direction(2, rng);
    // half of the circle
    CHECK(hemisphere_functional(K, norm2, 1, xi, rule) == doctest::Approx(kPi).epsilon(1e-12));
  }
  const auto v1 = builtin::first_component_phi(2, 2.0);
  // int cos over (-pi/2, pi/2)
  CHECK(hemisphere_functional(K, v1, 1, Vec{1.0, 0.0}, rule) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(hemisphere_functional(K, v1, -1, Vec{1.0, 0.0}, rule) == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(hemisphere_functional(K, v1, 1, Vec{0.0, 1.0}, rule)) < 1e-12);

  const auto K3 = builtin::identity_kernel(3, 1.0);
  const auto q3 = builtin::quadratic_phi(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const auto rule3 = SphereRule::for_dim(3, 4096);
  CHECK(q3.p() == 2.0);
  CHECK(hemisphere_functional(K3, q3, 1, normalized(Vec{1.0, 2.0, -0.5}), rule3) ==
        doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("reflection identity for random kernels") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto rule = SphereRule::circle(2048);
  for (int t = 0; t < 3; ++t) {
    builtin::FourierSeries a, b;
    a.constant = u(rng);
    b.constant = u(rng);
    a.cos = {u(rng), u(rng)};
    b.sin = {u(rng), u(rng)};
    const auto K = builtin::fourier_kernel(1.0, {a, b});
    const auto phi = builtin::quadratic_phi(2, {u(rng), u(rng), u(rng), u(rng)});
    const double full = sphere_integral(2, phi_of_kernel(K, phi, 1), rule);
    for (int i = 0; i < 20; ++i) {
      const Vec xi = random_direction(2, rng);
      const double s = hemisphere_functional(K, phi, 1, xi, rule) + hemisphere_functional(K, phi, 1, xi * -1.0, rule);
      CHECK(std::abs(s - full) < 1e-9);
    }
  }
}

TEST_CASE("cancellation sweep separates the trace-free integrand from |v|^2") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto rule = SphereRule::circle(4096);
  const auto tf = cancellation_sweep(K, builtin::trace_free_quadratic_phi(), 90, rule);
  CHECK(tf.pass);
  CHECK(tf.max_abs < 1e-9);
  CHECK(tf.xi_grid.size() == 90);
  CHECK(tf.abs_integral == doctest::Approx(4.0).epsilon(1e-6));  // int |cos 2t| dt
  const auto sq = cancellation_sweep(K, norm2, 90, rule);
  CHECK_FALSE(sq.pass);
  // the full-circle integral 2 pi dominates the half-circle values
  CHECK(sq.max_abs == doctest::Approx(2 * kPi).epsilon(1e-10));
  // v1|v| cancels on the full circle but not on half circles
  const auto v1 = cancellation_sweep(K, builtin::first_component_phi(2, 2.0), 90, rule);
  CHECK(std::abs(v1.full_plus) < 1e-10);
  CHECK_FALSE(v1.pass);
}

TEST_CASE("sweep is independent of the worker count") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto rule = SphereRule::circle(1024);
  const auto a = cancellation_sweep(K, builtin::first_component_phi(2, 2.0), 64, rule, 0.0, 1);
  const auto b = cancellation_sweep(K, builtin::first_component_phi(2, 2.0), 64, rule, 0.0, 4);
  CHECK(a.values_plus == b.values_plus);
  CHECK(a.values_minus == b.values_minus);
  CHECK(a.max_abs == b.max_abs);
}

TEST_CASE("psi profile on the unit disk") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const Vec z{0.0, -1.0};
  const auto rule = SphereRule::circle(1 << 14);
  // z + rho zeta lies in the disk iff zeta_2 > rho / 2: an arc of length pi - 2 asin(rho/2)
  for (double rho : {1e-3, 0.1, 0.5, 1.0, 1.9}) {
    const double want = kPi - 2.0 * std::asin(rho / 2.0);
    CHECK(psi_profile(disk, z, K, norm2, 1, rho, rule) == doctest::Approx(want).epsilon(1e-6));
  }
  CHECK(psi_profile(disk, z, K, norm2, 1, 2.5, rule) == 0.0);
  // the trace-free profile is int cos(2t) over that arc
  for (double rho : {0.3, 1.2}) {
    const double a = std::asin(rho / 2.0);
    const double want = -std::sin(2.0 * a);
    CHECK(psi_profile(disk, z, K, builtin::trace_free_quadratic_phi(), 1, rho, rule) ==
          doctest::Approx(want).epsilon(1e-5));
  }
}
