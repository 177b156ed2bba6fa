#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "philab/error.hpp"
#include "philab/integrate.hpp"

using namespace philab;

namespace {

constexpr double kPi = std::numbers::pi;

double shoelace_area(const Domain& d, int n = 20000) {
  double a = 0.0;
  Vec prev = d.boundary_point(0.0);
  for (int i = 1; i <= n; ++i) {
    const Vec z = d.boundary_point(2 * kPi * i / n);
    a += prev[0] * z[1] - prev[1] * z[0];
    prev = z;
  }
  return 0.5 * std::abs(a);
}

const PhiIntegrand norm2 = builtin::quadratic_phi(2, {1, 0, 0, 1});

}  // namespace

TEST_CASE("area and second moment of the disk") {
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const Box box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}};
  IntegrandHints hints;
  const auto one = integrate_region(Region::of(disk), box, [](const Vec&) { return 1.0; }, hints, {});
  CHECK(one.value == doctest::Approx(kPi).epsilon(1e-8));
  const auto r2 = integrate_region(
      Region::of(disk), box, [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; }, hints, {});
  CHECK(r2.value == doctest::Approx(kPi / 2).epsilon(1e-8));
}

TEST_CASE("area of a perturbed disk") {
  BoundaryProfile prof;
  prof.frequency = 3;
  const Domain g = Domain::graph_disk(Vec{0.0, 0.0}, 1.0, 0.1, prof);
  const Box box{Vec{-1.3, -1.3}, Vec{1.3, 1.3}};
  const auto one = integrate_region(Region::of(g), box, [](const Vec&) { return 1.0; }, {}, {});
  CHECK(one.value == doctest::Approx(shoelace_area(g)).epsilon(1e-7));
}

TEST_CASE("single dyadic piece of a central mass") {
  // |K_0 * delta|^2 = |x|^{-2} on 1/2 <= |x| < 1, so the integral is 2 pi log 2
  const auto K = builtin::identity_kernel(2, 1.0);
  const FieldSpec spec{K, RadialWindow::piece(0), SourceFunction::point_masses({{Vec{0.0, 0.0}, 1.0}}), norm2};
  const auto r = integrate_over_domain(Domain::ball(Vec{0.0, 0.0}, 2.0), spec);
  CHECK(r.value == doctest::Approx(2 * kPi * std::log(2.0)).epsilon(1e-7));
  CHECK_FALSE(r.warning);
  // the annulus doubles at n = -1 but the integral is scale invariant
  const FieldSpec spec1{K, RadialWindow::piece(-1), spec.source, norm2};
  CHECK(integrate_over_domain(Domain::ball(Vec{0.0, 0.0}, 3.0), spec1).value ==
        doctest::Approx(2 * kPi * std::log(2.0)).epsilon(1e-7));
}

TEST_CASE("annulus cut by a half-plane") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const double c = 0.2;
  const FieldSpec spec{K, RadialWindow::piece(0), SourceFunction::point_masses({{Vec{0.0, 0.0}, 1.0}}), norm2};
  const auto r = integrate_over_domain(Domain::half_space(Vec{0.0, 1.0}, c), spec);
  // int_{1/2}^{1} (pi - 2 asin(c / r)) / r dr
  const int n = 200000;
  double want = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 + 0.5 * (i + 0.5) / n;
    want += (kPi - 2.0 * std::asin(c / s)) / s;
  }
  want *= 0.5 / n;
  CHECK(r.value == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("point mass under a window at the origin is regularised") {
  const auto K = builtin::identity_kernel(2, 1.0);
  IntegrationSettings s;
  s.pv_level = 6;
  const FieldSpec spec{K, RadialWindow::cumulative(3), SourceFunction::point_masses({{Vec{0.0, 0.0}, 1.0}}), norm2};
  // window |x| >= 1/16 inside the unit disk: 2 pi log 16
  const auto r = integrate_over_domain(Domain::ball(Vec{0.0, 0.0}, 1.0), spec, s);
  CHECK(r.value == doctest::Approx(2 * kPi * std::log(16.0)).epsilon(1e-7));
  CHECK_FALSE(r.principal_value);
}

TEST_CASE("unbounded domain with full window needs zero mean") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const FieldSpec spec{K, RadialWindow::full(), SourceFunction::bump(Vec{0.0, 1.0}, 2.0, 1.0), norm2};
  CHECK_THROWS_AS(integrate_over_domain(Domain::half_space(Vec{0.0, 1.0}), spec), ValidationError);
}
