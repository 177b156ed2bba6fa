#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "philab/error.hpp"
#include "philab/kernel.hpp"

using namespace philab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("identity kernel is homogeneous of degree alpha - d") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int d : {2, 3}) {
    const auto K = builtin::identity_kernel(d, 1.0);
    for (int i = 0; i < 50; ++i) {
      Vec x(d);
      for (int k = 0; k < d; ++k) x[k] = u(rng);
      const double lam = std::exp(u(rng));
      const Vec a = K(x * lam);
      const Vec b = K(x) * std::pow(lam, 1.0 - d);
      CHECK((a - b).norm() <= 1e-13 * b.norm());
    }
  }
}

TEST_CASE("gradient kernel matches x / (2 pi |x|^2)") {
  const auto K = builtin::riesz_gradient_kernel(2);
  CHECK(K.alpha() == doctest::Approx(1.0));
  for (const Vec& x : {Vec{1.0, 0.0}, Vec{0.3, -0.4}, Vec{-2.0, 5.0}}) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const Vec want{x[0] / (2 * kPi * r2), x[1] / (2 * kPi * r2)};
    CHECK((K(x) - want).norm() <= 1e-15 * want.norm());
  }
}

TEST_CASE("fourier kernel evaluates its series on the circle") {
  builtin::FourierSeries a;
  a.constant = 0.5;
  a.cos = {1.0, 0.0};
  a.sin = {0.0, -2.0};
  const auto K = builtin::fourier_kernel(1.0, {a});
  const double t = 0.7;
  // 0.5 + cos t - 2 sin 2t
  const double want = 0.5 + std::cos(t) - 2.0 * std::sin(2 * t);
  CHECK(K.on_sphere(Vec{std::cos(t), std::sin(t)})[0] == doctest::Approx(want).epsilon(1e-14));
  CHECK(K(Vec{2 * std::cos(t), 2 * std::sin(t)})[0] == doctest::Approx(want / 2).epsilon(1e-14));
}

TEST_CASE("table kernel interpolates linearly in angle") {
  const auto path = std::filesystem::temp_directory_path() / "philab_table_kernel.csv";
  {
    std::ofstream os(path);
    os.precision(17);
    os << "theta,k0,k1\n";
    for (int i = 0; i < 8; ++i) {
      const double t = 2 * kPi * i / 8;
      os << t << "," << i << "," << -i << "\n";
    }
  }
  const auto K = builtin::table_kernel(1.0, SphereTable::load_csv(path));
  const double mid = 2 * kPi * 2.5 / 8;
  const Vec v = K.on_sphere(Vec{std::cos(mid), std::sin(mid)});
  CHECK(v[0] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(-2.5).epsilon(1e-12));
  // periodic wrap between the last sample and the first
  const double wrap = 2 * kPi * 7.5 / 8;
  CHECK(K.on_sphere(Vec{std::cos(wrap), std::sin(wrap)})[0] == doctest::Approx(3.5).epsilon(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("built-in integrands") {
  const Vec v{3.0, -4.0};
  CHECK(builtin::quadratic_phi(2, {1, 0, 0, 1})(v) == doctest::Approx(25.0));
  CHECK(builtin::quadratic_phi(2, {1, 2, 0, -1})(v) == doctest::Approx(9.0 - 24.0 - 16.0));
  CHECK(builtin::trace_free_quadratic_phi()(v) == doctest::Approx(9.0 - 16.0));
  CHECK(builtin::norm_power_phi(2, 1.5)(v) == doctest::Approx(std::pow(5.0, 1.5)));
  CHECK(builtin::first_component_phi(2, 2.0)(v) == doctest::Approx(15.0));
  CHECK(builtin::first_component_phi(2, 2.0).p() == 2.0);
}

TEST_CASE("integrands scale with degree p") {
  const auto phi = builtin::norm_power_phi(3, 1.5);
  const Vec v{0.2, -1.0, 0.7};
  CHECK(phi(v * 3.0) == doctest::Approx(std::pow(3.0, 1.5) * phi(v)).epsilon(1e-13));
  CHECK(phi(Vec(3)) == 0.0);
}

TEST_CASE("homogeneity relation p(d - alpha) = d") {
  CHECK_NOTHROW(check_homogeneity(2, 1.0, 2.0));
  CHECK_NOTHROW(check_homogeneity(3, 1.0, 1.5));
  CHECK_NOTHROW(check_homogeneity(3, 2.0, 3.0));
  CHECK_NOTHROW(check_homogeneity(2, 0.5, 4.0 / 3.0));
  CHECK_THROWS_AS(check_homogeneity(2, 1.0, 3.0), ValidationError);
  CHECK_THROWS_AS(check_homogeneity(2, 2.0, 2.0), ValidationError);
  try {
    check_homogeneity(2, 0.5, 2.0);
    FAIL("mismatch accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("p*(d-alpha) = d") != std::string::npos);
  }
}

TEST_CASE("radial windows") {
  const auto piece = RadialWindow::piece(3);
  CHECK(piece.inner == doctest::Approx(1.0 / 16));
  CHECK(piece.outer == doctest::Approx(1.0 / 8));
  CHECK(piece.contains(1.0 / 16));
  CHECK_FALSE(piece.contains(1.0 / 8));
  const auto cum = RadialWindow::cumulative(3);
  CHECK(cum.contains(0.1));
  CHECK(cum.contains(100.0));
  CHECK_FALSE(cum.contains(0.01));
  const auto K = builtin::identity_kernel(2, 1.0);
  const KernelPiece kp{K, 3, KernelPiece::Mode::single};
  CHECK(kernel_piece_eval(kp, Vec{0.2, 0.0}).norm() == 0.0);
  CHECK(kernel_piece_eval(kp, Vec{0.1, 0.0})[0] == doctest::Approx(10.0));
  // a point sits in exactly one piece
  for (double r : {0.3, 0.07, 1e-3, 5.0}) {
    int hits = 0;
    for (int n = -10; n <= 20; ++n) hits += RadialWindow::piece(n).contains(r) ? 1 : 0;
    CHECK(hits == 1);
  }
}

TEST_CASE("M_p interaction term") {
  CHECK(m_p(2.0, 3.0, 5.0) == doctest::Approx(15.0));
  CHECK(m_p(1.5, 4.0, 1.0) == doctest::Approx(std::min(std::sqrt(4.0) * 1.0, 4.0 * 1.0)));
  CHECK(m_p(3.0, 2.0, 1.0) == doctest::Approx(0.5 * (4.0 + 2.0)));
  CHECK(m_p(2.0, 0.0, 7.0) == 0.0);
  CHECK_THROWS_AS(m_p(2.0, -1.0, 1.0), DomainError);
}

TEST_CASE("perturbation probe gives a finite constant for |v|^2") {
  // |a+b|^2 - |a|^2 = 2<a,b> + |b|^2, so the ratio stays bounded
  const auto probe = phi_perturbation_probe(builtin::quadratic_phi(2, {1, 0, 0, 1}), 2000, 5);
  CHECK(probe.pairs_used > 0);
  CHECK(std::isfinite(probe.constant));
  CHECK(probe.constant > 0.0);
  CHECK(probe.constant < 10.0);
}
