#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "philab/convolution.hpp"
#include "philab/error.hpp"

using namespace philab;

namespace {

constexpr double kPi = std::numbers::pi;

// K * f at x in polar coordinates around x: int_S K(zeta) int_0^R f(x - r zeta) dr dzeta
// (alpha = 1, d = 2). Midpoint in r, trapezoid in angle.
Vec polar_oracle(const HomogeneousKernel& K, const SourceFunction& f, const Vec& x, double R, double inner = 0.0,
                 double outer = 1e300) {
  const int nt = 720, nr = 6000;
  Vec acc(K.target_dim());
  for (int i = 0; i < nt; ++i) {
    const double t = 2 * kPi * i / nt;
    const Vec zeta{std::cos(t), std::sin(t)};
    double line = 0.0;
    for (int j = 0; j < nr; ++j) {
      const double r = R * (j + 0.5) / nr;
      if (r < inner || r >= outer) continue;
      line += f.density(x - zeta * r);
    }
    acc = acc + K.on_sphere(zeta) * (line * R / nr * 2 * kPi / nt);
  }
  return acc;
}

}  // namespace

TEST_CASE("bump profile normalisation") {
  CHECK(bump_profile_integral(2) == doctest::Approx(kPi / 3).epsilon(1e-14));
  // 4 pi int (1 - r^2)^2 r^2 dr = 4 pi (1/3 - 2/5 + 1/7)
  CHECK(bump_profile_integral(3) == doctest::Approx(4 * kPi * (1.0 / 3 - 2.0 / 5 + 1.0 / 7)).epsilon(1e-14));
  const Bump b{Vec{0.0, 0.0}, 2.0, 3.0};
  CHECK(b.density(Vec{0.6, 0.0}) == 0.0);
  CHECK(b.density(Vec{0.0, 0.0}) == doctest::Approx(3.0 * 4.0 / (kPi / 3)));
}

TEST_CASE("point masses convolve to a sum of kernel values") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::point_masses({{Vec{0.0, 0.0}, 2.0}, {Vec{1.0, 1.0}, -0.5}});
  const Vec x{0.3, -0.4};
  const Vec want = K(x) * 2.0 - K(x - Vec{1.0, 1.0}) * 0.5;
  CHECK((convolve_at(K, f, x).value - want).norm() < 1e-14);
  CHECK_THROWS_AS(convolve_at(K, f, Vec{0.0, 0.0}), SingularityError);
  // a window that stays away from the origin makes the mass location harmless
  const auto piece = convolve_at(KernelPiece{K, 0, KernelPiece::Mode::single}, f, Vec{0.0, 0.0});
  CHECK(piece.value.norm() == 0.0);
}

TEST_CASE("bump convolution against polar quadrature") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::bump(Vec{0.2, 0.1}, 2.0, 1.5);
  SUBCASE("outside the support") {
    const Vec x{1.5, -0.3};
    const Vec got = convolve_at(K, f, x).value;
    const Vec want = polar_oracle(K, f, x, 2.5);
    CHECK((got - want).norm() < 1e-6 * want.norm());
  }
  SUBCASE("inside the support") {
    const Vec x{0.35, 0.0};
    const Vec got = convolve_at(K, f, x).value;
    const Vec want = polar_oracle(K, f, x, 1.2);
    CHECK((got - want).norm() < 1e-6 * std::max(1.0, want.norm()));
  }
  SUBCASE("dyadic piece only sees its annulus") {
    const Vec x{0.35, 0.0};
    const auto w = RadialWindow::piece(2);
    const Vec got = convolve_at(K, w, f, x).value;
    const Vec want = polar_oracle(K, f, x, 1.2, w.inner, w.outer);
    CHECK((got - want).norm() < 1e-6 * std::max(1.0, want.norm()));
  }
}

TEST_CASE("pieces sum to the full convolution") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::bump(Vec{0.0, 0.0}, 1.0, 1.0);
  const Vec x{0.4, 0.3};
  Vec sum = convolve_at(KernelPiece{K, -1, KernelPiece::Mode::cumulative}, f, x).value;
  for (int n = 0; n <= 40; ++n) sum = sum + convolve_at(KernelPiece{K, n, KernelPiece::Mode::single}, f, x).value;
  const Vec full = convolve_at(K, f, x).value;
  CHECK((sum - full).norm() < 1e-8);
}

TEST_CASE("dilation identity") {
  // (K * f_n)(x) = n^{d - alpha} (K * f)(n x)
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::bump(Vec{0.3, 0.0}, 1.5, 1.0);
  const double n = 4.0;
  const Vec x{0.05, 0.1};
  const Vec lhs = convolve_at(K, f.dilated(n), x).value;
  const Vec rhs = convolve_at(K, f, x * n).value * n;
  CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
}

TEST_CASE("grid field does not depend on the worker count") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::bump(Vec{0.0, 0.0}, 2.0, 1.0);
  GridSpec g{Vec{-1.0, -1.0}, 0.25, {8, 8, 0}};
  const auto a = convolve_field(K, RadialWindow::full(), f, g, {}, 1);
  const auto b = convolve_field(K, RadialWindow::full(), f, g, {}, 4);
  CHECK(a.values.size() == 64 * 2);
  CHECK(a.values == b.values);
  const Vec c = g.cell_center(9);
  CHECK(c[0] == doctest::Approx(-0.625));
  CHECK(c[1] == doctest::Approx(-0.625));
  CHECK((a.at(9) - convolve_at(K, f, c).value).norm() < 1e-14);
}

TEST_CASE("csv and binary output") {
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto f = SourceFunction::point_masses({{Vec{0.01, 0.02}, 1.0}});
  GridSpec g{Vec{-0.5, -0.5}, 0.5, {2, 3, 0}};
  const auto field = convolve_field(K, RadialWindow::full(), f, g);
  const auto dir = std::filesystem::temp_directory_path() / "philab_fieldconv_test";
  std::filesystem::create_directories(dir);
  field.write_binary(dir / "f.bin");
  const auto back = FieldOnGrid::read_binary(dir / "f.bin");
  CHECK(back.target_dim == 2);
  CHECK(back.grid.extents[0] == 2);
  CHECK(back.grid.extents[1] == 3);
  CHECK(back.grid.spacing == 0.5);
  CHECK(back.values == field.values);
  field.write_csv(dir / "f.csv");
  std::ifstream is(dir / "f.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "x0,x1,v0,v1");
  int rows = 0;
  for (std::string line; std::getline(is, line);) rows += line.empty() ? 0 : 1;
  CHECK(rows == 6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("low-frequency part is bounded by the mass") {
  const auto K = builtin::identity_kernel(2, 1.0);
  auto f = SourceFunction::point_masses({{Vec{0.0, 0.0}, 1.0}, {Vec{0.5, 0.0}, -2.0}});
  f.add(SourceFunction::bump(Vec{-0.3, 0.2}, 3.0, 0.7));
  const auto chk = low_freq_sup_check(K, f, 33);
  CHECK(chk.holds);
  CHECK(chk.lhs > 0.0);
  CHECK(chk.rhs == doctest::Approx(2.0 * 1.0 * 3.7).epsilon(1e-6));
}
