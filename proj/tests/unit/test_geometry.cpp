#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "philab/domain.hpp"
#include "philab/error.hpp"

using namespace philab;

namespace {

constexpr double kPi = std::numbers::pi;

// Does the closed box meet the boundary of the disk? Brute force over a fine
// grid of the box: both an inside and an outside sample must exist.
bool grid_meets_circle(const Box& b, const Vec& c, double r, int n = 400) {
  bool in = false, out = false;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const Vec x{b.lo[0] + (b.hi[0] - b.lo[0]) * i / n, b.lo[1] + (b.hi[1] - b.lo[1]) * j / n};
      ((x - c).norm() < r ? in : out) = true;
    }
  return in && out;
}

}  // namespace

TEST_CASE("ball geometry") {
  const Domain d = Domain::ball(Vec{1.0, -2.0}, 2.0);
  CHECK(d.dim() == 2);
  CHECK(d.bounded());
  CHECK(d.diameter() == doctest::Approx(4.0));
  CHECK(d.contains(Vec{1.0, -1.0}));
  CHECK_FALSE(d.contains(Vec{3.5, -2.0}));
  CHECK(d.signed_distance(Vec{1.0, -1.0}) == doctest::Approx(-1.0));
  CHECK(d.signed_distance(Vec{4.0, -2.0}) == doctest::Approx(1.0));
  const Vec x{2.0, 0.0};
  const Vec nb = d.nearest_boundary_point(x);
  const Vec want = Vec{1.0, -2.0} + normalized(x - Vec{1.0, -2.0}) * 2.0;
  CHECK((nb - want).norm() < 1e-14);
  const Vec nu = d.inward_normal(Vec{3.0, -2.0});
  CHECK((nu - Vec{-1.0, 0.0}).norm() < 1e-14);
  CHECK_THROWS_AS(Domain::ball(Vec{0.0, 0.0}, -1.0), ValidationError);
}

TEST_CASE("half-space geometry") {
  const Domain h = Domain::half_space(Vec{0.0, 1.0}, 0.5);
  CHECK_FALSE(h.bounded());
  CHECK(h.contains(Vec{0.0, 1.0}));
  CHECK_FALSE(h.contains(Vec{7.0, 0.0}));
  CHECK(h.signed_distance(Vec{3.0, 2.5}) == doctest::Approx(-2.0));
  CHECK((h.inward_normal(Vec{0.0, 0.5}) - Vec{0.0, 1.0}).norm() < 1e-15);
  CHECK((h.nearest_boundary_point(Vec{3.0, 2.5}) - Vec{3.0, 0.5}).norm() < 1e-14);
  CHECK_THROWS_AS(Domain::half_space(Vec{0.0, 2.0}), ValidationError);
}

TEST_CASE("graph disk boundary points lie on the boundary") {
  BoundaryProfile prof;
  prof.frequency = 3;
  const Domain g = Domain::graph_disk(Vec{0.0, 0.0}, 1.0, 0.1, prof);
  for (int i = 0; i < 32; ++i) {
    const double t = 2 * kPi * i / 32;
    const Vec z = g.boundary_point(t);
    CHECK(std::abs(g.signed_distance(z)) < 1e-9);
    const Vec nu = g.inward_normal(z);
    CHECK(g.contains(z + nu * 1e-4));
    CHECK_FALSE(g.contains(z - nu * 1e-4));
  }
  CHECK(g.contains(Vec{0.0, 0.0}));
  CHECK_FALSE(g.contains(Vec{1.5, 0.0}));
  // the perturbation must keep the boundary a graph
  CHECK_THROWS_AS(Domain::graph_disk(Vec{0.0, 0.0}, 1.0, 0.5, prof), ValidationError);
}

TEST_CASE("dyadic cubes") {
  const auto q = DyadicCube::containing(Vec{0.3, -0.7}, 2);
  CHECK(q.side() == 0.25);
  CHECK(q.index[0] == 1);
  CHECK(q.index[1] == -3);
  CHECK(q.contains(Vec{0.3, -0.7}));
  const auto kids = q.children();
  CHECK(kids.size() == 4);
  int holding = 0;
  for (const auto& k : kids) {
    CHECK(k.parent() == q);
    CHECK(k.side() == 0.125);
    holding += k.contains(Vec{0.3, -0.7}) ? 1 : 0;
  }
  CHECK(holding == 1);
  const auto big = DyadicCube::containing(Vec{0.3, -0.7}, -1);
  CHECK(big.side() == 2.0);
  CHECK(DyadicCube::containing(Vec{0.1, 0.1, 0.9}, 0).children().size() == 8);
  const Box dil = q.dilated(3.0);
  CHECK(dil.side(0) == doctest::Approx(0.75));
  CHECK((dil.center() - q.center()).norm() < 1e-15);
}

TEST_CASE("boundary cubes agree with a brute-force grid test") {
  const Vec c{0.1, -0.2};
  const double r = 0.8;
  const Domain disk = Domain::ball(c, r);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int agree = 0, tested = 0;
  for (int t = 0; t < 300; ++t) {
    const int g = 1 + static_cast<int>(rng() % 5);
    const auto q = DyadicCube::containing(Vec{u(rng), u(rng)}, g);
    const Box box = q.dilated(4.0);  // (d + 2) Q
    // skip cubes whose dilation only grazes the circle
    const double to_center = (box.center() - c).norm();
    const double half_diag = 0.5 * box.diagonal();
    if (std::abs(to_center - r) < 1e-3 || std::abs(to_center + half_diag - r) < 1e-3) continue;
    ++tested;
    agree += is_boundary_cube(disk, q) == grid_meets_circle(box, c, r) ? 1 : 0;
  }
  CHECK(tested > 200);
  CHECK(agree == tested);
}

TEST_CASE("parents of boundary cubes are boundary cubes") {
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int t = 0; t < 500; ++t) {
    const auto q = DyadicCube::containing(Vec{u(rng), u(rng)}, 1 + static_cast<int>(rng() % 8));
    if (is_boundary_cube(disk, q)) CHECK(is_boundary_cube(disk, q.parent()));
  }
}

TEST_CASE("box crossing test") {
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  CHECK(disk.box_meets_boundary(Box{Vec{0.9, -0.1}, Vec{1.1, 0.1}}));
  CHECK_FALSE(disk.box_meets_boundary(Box{Vec{-0.2, -0.2}, Vec{0.2, 0.2}}));
  CHECK_FALSE(disk.box_meets_boundary(Box{Vec{2.0, 2.0}, Vec{3.0, 3.0}}));
}

TEST_CASE("transformed domain is the rescaled copy") {
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const Vec z{0.0, -1.0};
  const Domain t = disk.transformed(z, 8.0);  // n (Omega - z)
  CHECK(t.contains(Vec{0.0, 1.0}));
  CHECK(t.contains(Vec{0.0, 15.0}));
  CHECK_FALSE(t.contains(Vec{0.0, 17.0}));
  CHECK(std::abs(t.signed_distance(Vec{0.0, 0.0})) < 1e-12);
}
