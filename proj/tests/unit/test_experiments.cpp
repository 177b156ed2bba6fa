#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "philab/error.hpp"
#include "philab/experiments.hpp"

using namespace philab;

namespace {

constexpr double kPi = std::numbers::pi;
const PhiIntegrand norm2 = builtin::quadratic_phi(2, {1, 0, 0, 1});

}  // namespace

TEST_CASE("plane and radial routes agree") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  IntegrationSettings s;
  s.tol = 1e-6;
  const auto a = blowup_value_plane(disk, Vec{0.0, -1.0}, K, norm2, 16, 2, s);
  const auto b = blowup_value_radial(disk, Vec{0.0, -1.0}, K, norm2, 16, 2, s);
  CHECK(b.value == doctest::Approx(a.value).epsilon(1e-6));
  CHECK(b.near + b.correction + b.radial == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("blowup slope approaches the hemisphere value") {
  const auto K = builtin::identity_kernel(2, 1.0);
  BlowupSettings bs;
  bs.boundary_point = Vec{0.0, -1.0};
  bs.n_list = {16, 32, 64, 128};
  bs.integration.tol = 1e-6;
  const auto r = necessity_blowup(Domain::ball(Vec{0.0, 0.0}, 1.0), K, norm2, bs);
  REQUIRE(r.fit.has_value());
  CHECK(r.reference == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(std::abs(r.fit->slope - kPi) < 0.15);
  CHECK(r.series.size() == 4);
  // the value grows like log n
  for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].second > r.series[i - 1].second);
  bs.n_list = {16, 32};
  CHECK_THROWS_AS(necessity_blowup(Domain::ball(Vec{0.0, 0.0}, 1.0), K, norm2, bs), ValidationError);
}

TEST_CASE("sampled sources") {
  std::mt19937_64 rng(21);
  SamplerSettings s;
  s.max_count = 6;
  const Domain h = Domain::half_space(Vec{0.0, 1.0});
  for (int i = 0; i < 20; ++i) {
    const auto f = sample_source(h, s, rng);
    CHECK(f.mean_zero());
    CHECK(std::abs(f.mass()) < 1e-12);
    CHECK(f.points().size() <= 6);
  }
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto f = sample_source(disk, s, rng);
    // drawn from the bounding box of the disk
    for (const auto& a : f.points()) CHECK(std::max(std::abs(a.location[0]), std::abs(a.location[1])) <= 1.0);
  }
  SamplerSettings b;
  b.kind = SamplerSettings::Kind::boundary_bumps;
  b.max_count = 3;
  for (int i = 0; i < 10; ++i) {
    const auto f = sample_source(disk, b, rng);
    for (const auto& bump : f.bumps()) {
      // support stays inside and touches down near the boundary
      CHECK(bump.center.norm() + bump.radius() <= 1.0 + 1e-12);
      CHECK(bump.scale <= 64.0);
    }
  }
}

TEST_CASE("ratio is invariant under scaling of f") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto phi = builtin::trace_free_quadratic_phi();
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const auto f = SourceFunction::bump(Vec{0.2, -0.7}, 8.0, 1.0);
  const auto g = f.scaled(-3.0);
  const double a = integrate_over_domain(disk, FieldSpec{K, RadialWindow::full(), f, phi}).value;
  const double b = integrate_over_domain(disk, FieldSpec{K, RadialWindow::full(), g, phi}).value;
  CHECK(b / std::pow(g.l1_norm(), 2.0) == doctest::Approx(a / std::pow(f.l1_norm(), 2.0)).epsilon(1e-8));
}

TEST_CASE("ratio sweep is deterministic for a seed") {
  const auto K = builtin::identity_kernel(2, 1.0);
  RatioSweepSettings rs;
  rs.trials = 2;
  rs.seed = 3;
  rs.sampler.max_count = 3;
  rs.integration.tol = 1e-6;
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const auto a = inequality_ratio_sweep(disk, K, builtin::trace_free_quadratic_phi(), rs);
  rs.integration.threads = 4;
  const auto b = inequality_ratio_sweep(disk, K, builtin::trace_free_quadratic_phi(), rs);
  CHECK(a.series == b.series);
  CHECK(a.rows == b.rows);
  for (const auto& [t, v] : a.series) CHECK(std::isfinite(v));
}

TEST_CASE("gradient demo grows by log 2 / 2 pi per level") {
  // |grad u|^2 = 1 / (4 pi^2 r^2); each level adds an annulus of ratio 2
  GradientDemoSettings g;
  g.laplacian = {{Vec{0.0, 0.0}, 1.0}};
  g.levels = {4, 6, 8};
  g.integration.tol = 1e-8;
  const auto r = mazya_gradient_demo(Domain::ball(Vec{0.0, 0.0}, 1.0), norm2, g);
  REQUIRE(r.fit.has_value());
  CHECK(r.fit->slope == doctest::Approx(std::log(2.0) / (2 * kPi)).epsilon(1e-7));
  // value at level N: log(2^{N+1}) / (2 pi)
  CHECK(r.series.front().second == doctest::Approx(5 * std::log(2.0) / (2 * kPi)).epsilon(1e-7));
}
