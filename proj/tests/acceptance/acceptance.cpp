// One line per acceptance criterion; the process fails if any line does.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "philab/besov.hpp"
#include "philab/convolution.hpp"
#include "philab/experiments.hpp"
#include "philab/sampling.hpp"
#include "philab/sphere.hpp"

using namespace philab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// plain least squares slope, kept separate from the library's fit
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Outcome criterion1() {
  Outcome o;
  const auto K = builtin::identity_kernel(2, 1.0);
  const SphereRule rule = SphereRule::circle(4096);
  const auto tf = cancellation_sweep(K, builtin::trace_free_quadratic_phi(), 360, rule, 0.0, 0);
  const auto v1 = builtin::first_component_phi(2, 2.0);
  const double full_plus = sphere_integral(2, phi_of_kernel(K, v1, 1), rule);
  const double full_minus = sphere_integral(2, phi_of_kernel(K, v1, -1), rule);
  const double hemi = hemisphere_functional(K, v1, 1, Vec{1.0, 0.0}, rule);
  // int_{-pi/2}^{pi/2} cos t dt
  const double oracle = 2.0;
  o.pass = tf.pass && tf.max_abs < 1e-9 && std::abs(full_plus) < 1e-10 && std::abs(full_minus) < 1e-10 &&
           std::abs(hemi - oracle) <= 1e-6;
  o.detail = "trace-free max_abs=" + fmt("%.3g", tf.max_abs) + " (<1e-9); v1|v| full=" + fmt("%.3g", full_plus) + "," +
             fmt("%.3g", full_minus) + " (<1e-10); hemisphere(1,0)=" + fmt("%.12g", hemi) + " (2 +- 1e-6)";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(20241);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SphereRule rule = SphereRule::circle(4096);
  double worst = 0.0;
  for (int pair = 0; pair < 5; ++pair) {
    std::vector<builtin::FourierSeries> comps(2);
    for (auto& c : comps) {
      c.constant = u(rng);
      for (int k = 0; k < 3; ++k) {
        c.cos.push_back(u(rng));
        c.sin.push_back(u(rng));
      }
    }
    const auto K = builtin::fourier_kernel(1.0, comps);
    std::vector<double> m(4);
    for (double& x : m) x = u(rng);
    const auto phi = pair % 2 == 0 ? builtin::quadratic_phi(2, m) : builtin::first_component_phi(2, 2.0);
    const double full = sphere_integral(2, phi_of_kernel(K, phi, 1), rule);
    for (int i = 0; i < 100; ++i) {
      const Vec xi = random_direction(2, rng);
      const double a = hemisphere_functional(K, phi, 1, xi, rule);
      const double b = hemisphere_functional(K, phi, 1, xi * -1.0, rule);
      worst = std::max(worst, std::abs(a + b - full));
    }
  }
  o.pass = worst <= 1e-9;
  o.detail = "max |hemi(xi)+hemi(-xi)-full|=" + fmt("%.3g", worst) + " over 500 (xi, pair) cases (<=1e-9)";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto K = builtin::identity_kernel(2, 1.0);
  ConvolutionSettings cs;
  const Vec c{0.3, -0.2};
  const auto f = SourceFunction::bump(c, 1.0, 1.0);
  std::vector<double> lx, ly;
  const Vec dir = Vec{0.6, 0.8};
  for (int k = 3; k <= 9; ++k) {
    const double r = std::ldexp(1.0, k);
    const Vec x = dir * r;
    const Vec diff = convolve_at(K, f, x, cs).value - K(x);
    lx.push_back(std::log(r));
    ly.push_back(std::log(diff.norm()));
  }
  const double slope = ls_slope(lx, ly);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec center{0.5 * u(rng), 0.5 * u(rng)};
    const double n = std::exp2(1.0 + 5.0 * (u(rng) + 1.0) / 2.0);
    const Vec x{2.0 * u(rng), 2.0 * u(rng)};
    const auto g = SourceFunction::bump(center, 1.0, 1.0);
    // n^d g(n y) is the bump of scale n centred at center / n
    const auto gn = SourceFunction::bump(center / n, n, 1.0);
    const Vec lhs = convolve_at(K, gn, x, cs).value;
    const Vec rhs = convolve_at(K, g, x * n, cs).value * std::pow(n, 2.0 - 1.0);
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
  }
  o.pass = slope >= -2.1 && slope <= -1.9 && worst <= 1e-8;
  o.detail = "decay exponent=" + fmt("%.4f", slope) + " (in [-2.1,-1.9]); dilation identity max rel err=" +
             fmt("%.3g", worst) + " (<=1e-8)";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const auto K = builtin::identity_kernel(2, 1.0);
  BlowupSettings s;
  s.boundary_point = Vec{0.0, -1.0};
  s.n_list = {16, 32, 64, 128, 256, 512, 1024};
  const auto sq = necessity_blowup(disk, K, builtin::quadratic_phi(2, {1, 0, 0, 1}), s);
  const auto tf = necessity_blowup(disk, K, builtin::trace_free_quadratic_phi(), s);
  const double elapsed = seconds_since(t0);

  const auto slope_of = [](const ExperimentResult& r) {
    std::vector<double> x, y;
    for (const auto& [n, v] : r.series) {
      x.push_back(std::log(n));
      y.push_back(v);
    }
    return ls_slope(x, y);
  };
  const double slope_sq = slope_of(sq);
  const double slope_tf = slope_of(tf);
  double tf_max = 0.0;
  for (const auto& [n, v] : tf.series) tf_max = std::max(tf_max, std::abs(v));
  const double xc_sq = sq.details["cross_check_max_relative_difference"].get<double>();
  const double xc_tf = tf.details["cross_check_max_relative_difference"].get<double>();
  const std::size_t checks = sq.details["cross_checks"].size();
  // hemisphere of |zeta|^2 is half the circle
  const double I = kPi;
  o.pass = std::abs(slope_sq - I) <= 0.1 * I && std::abs(slope_tf) < 0.05 * 2.0 * kPi && tf_max < 1.0 &&
           elapsed < 300.0 && checks >= 3 && xc_sq <= 0.01 && xc_tf <= 0.01;
  o.detail = "|v|^2 slope=" + fmt("%.4f", slope_sq) + " vs pi (10%); trace-free slope=" + fmt("%.3g", slope_tf) +
             " max|value|=" + fmt("%.3g", tf_max) + "; radial vs plane max rel diff=" +
             fmt("%.2g", std::max(xc_sq, xc_tf)) + " at " + std::to_string(checks) + " n (<=1%); " +
             fmt("%.1f", elapsed) + "s (<300s)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const auto K = builtin::identity_kernel(2, 1.0);
  IntegrationSettings st;
  st.threads = 0;
  const auto f = SourceFunction::point_masses({{Vec{0.1, 0.2}, 1.0},
                                               {Vec{-0.4, 0.3}, -0.7},
                                               {Vec{0.5, -0.5}, 0.4},
                                               {Vec{0.0, -0.99}, 0.8},
                                               {Vec{-0.6, -0.2}, -0.3}});
  const auto tf = builtin::trace_free_quadratic_phi();
  const auto narrow = besov_sum(f, disk, K, tf, -2, 6, st);
  const auto wide = besov_sum(f, disk, K, tf, -2, 10, st);
  const double change = std::abs(wide.ratio - narrow.ratio) / narrow.ratio;

  const auto central = besov_sum(SourceFunction::point_masses({{Vec{0.0, 0.0}, 1.0}}), disk, K,
                                 builtin::quadratic_phi(2, {1, 0, 0, 1}), 0, 6, st);
  // int_{2^{-n-1}}^{2^{-n}} r^{-2} 2 pi r dr
  const double oracle = 2.0 * kPi * std::log(2.0);
  double worst = 0.0, worst_step = 0.0;
  for (std::size_t i = 0; i < central.terms.size(); ++i) {
    worst = std::max(worst, std::abs(central.terms[i].term - oracle));
    const double prev = i ? central.terms[i - 1].cumulative : 0.0;
    worst_step = std::max(worst_step, std::abs(central.terms[i].cumulative - prev - oracle));
  }
  o.pass = change <= 0.25 && worst <= 1e-6 && worst_step <= 1e-6 && central.terms.size() == 7;
  o.detail = "trace-free ratio " + fmt("%.6g", narrow.ratio) + " -> " + fmt("%.6g", wide.ratio) + " (change " +
             fmt("%.2g", change) + ", <=25%); central |v|^2 pieces max err=" + fmt("%.2g", worst) +
             " vs 2pi log2, cumulative step err=" + fmt("%.2g", worst_step) + " (<=1e-6)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ps[] = {1.5, 2.0, 3.0};
  int monotone_fail = 0, telescope_fail = 0, mass_fail = 0, contain_fail = 0, chains = 0;
  double worst_contain = 0.0;
  const double bound = std::sqrt(2.0) + 1.0;
  for (int t = 0; t < 1000; ++t) {
    const double p = ps[t % 3];
    const DyadicCube q{2, 0, {0, 0, 0}};
    const Vec center{0.2 + 0.6 * u(rng), 0.2 + 0.6 * u(rng)};
    const Domain omega = Domain::ball(center, 0.1 + 0.5 * u(rng));
    std::vector<PointMass> pts;
    const int k = 1 + static_cast<int>(rng() % 8);
    for (int j = 0; j < k; ++j) {
      Vec x{u(rng), u(rng)};
      // half of the atoms sit near the boundary
      if (j % 2 == 0) {
        const Vec b = omega.nearest_boundary_point(x);
        x = b + (x - b) * std::pow(u(rng), 4.0);
      }
      for (int i = 0; i < 2; ++i) x[i] = std::clamp(x[i], 0.0, std::nextafter(1.0, 0.0));
      pts.push_back({x, 2.0 * u(rng) - 1.0});
    }
    const auto f = SourceFunction::point_masses(pts);
    const auto ledger = energy_ledger(f, q, omega, p, 20);
    for (std::size_t m = 1; m < ledger.boundary.size(); ++m)
      if (ledger.boundary[m] > ledger.boundary[m - 1] * (1.0 + 1e-12)) {
        ++monotone_fail;
        break;
      }
    const auto sums = telescope_energy_sum(ledger, chain_epsilon(0.2, p));
    if (sums.raw > std::pow(ledger.l1_norm, p) * (1.0 + 1e-12)) ++telescope_fail;
    if (!is_boundary_cube(omega, q)) continue;
    const auto chain = build_cube_chain(f, q, omega, 0.2, p);
    ++chains;
    // direct check of |x - c0| <= C 2^{-m} l(Q) at the far corner of each cube
    double c_obs = 0.0;
    for (std::size_t m = 0; m < chain.cubes.size(); ++m) {
      const Box b = chain.cubes[m].box();
      double far = 0.0;
      for (int corner = 0; corner < 4; ++corner) {
        const Vec x{corner & 1 ? b.hi[0] : b.lo[0], corner & 2 ? b.hi[1] : b.lo[1]};
        far = std::max(far, (x - chain.c0).norm());
      }
      c_obs = std::max(c_obs, far / std::ldexp(1.0, -static_cast<int>(m)));
    }
    worst_contain = std::max(worst_contain, c_obs);
    if (c_obs > bound) ++contain_fail;
    const double total = chain.masses.front();
    const int last = chain.stop_index ? *chain.stop_index : static_cast<int>(chain.masses.size()) - 1;
    for (int m = 0; m <= last; ++m)
      if (total > std::pow(1.0 - 0.2, -m) * chain.masses[m] * (1.0 + 1e-12)) {
        ++mass_fail;
        break;
      }
  }
  const auto probe = new_simple_probe(100000, 6, {1.5, 2.0, 3.0}, 4242);
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : probe) min_ratio = std::min(min_ratio, r.min_ratio);
  o.pass = monotone_fail == 0 && telescope_fail == 0 && mass_fail == 0 && contain_fail == 0 && min_ratio > 0.0;
  o.detail = "E^b monotone violations=" + std::to_string(monotone_fail) + "/1000; telescope > ||f||^p: " +
             std::to_string(telescope_fail) + "; chains=" + std::to_string(chains) + " mass-bound violations=" +
             std::to_string(mass_fail) + " containment (C=sqrt(2)+1) violations=" + std::to_string(contain_fail) +
             " worst C=" + fmt("%.4f", worst_contain) + "; new_simple min ratio=" + fmt("%.4g", min_ratio) + " (>0)";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const Domain disk = Domain::ball(Vec{0.0, 0.0}, 1.0);
  const auto K = builtin::identity_kernel(2, 1.0);
  const auto phi = builtin::trace_free_quadratic_phi();
  IntegrationSettings st;
  st.threads = 0;
  std::mt19937_64 rng(4141);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double C = 0.0;
  int unexplained = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<PointMass> pts;
    const int k = 2 + static_cast<int>(rng() % 5);
    for (int j = 0; j < k; ++j) {
      Vec x = random_in_ball(2, 1.0, rng);
      if (j % 2 == 0) x = normalized(x) * (1.0 - 0.05 * std::abs(u(rng)));
      pts.push_back({x, u(rng)});
    }
    const auto f = SourceFunction::point_masses(pts);
    const double scale = std::pow(f.l1_norm(), 2.0);
    for (int n = 0; n <= 6; ++n) {
      const auto s = theorem41_sides(f, n, disk, K, phi, CubeSumMode::tripled, st);
      const double rhs = s.term1 + s.term2 + s.term3;
      if (rhs > 0.0) C = std::max(C, s.lhs / rhs);
      else if (s.lhs > st.tol * scale) ++unexplained;
    }
  }

  // term3 for masses sitting on the boundary
  std::vector<PointMass> on_boundary;
  for (int j = 0; j < 6; ++j) {
    const double a = 2.0 * kPi * (j + 0.37) / 6.0;
    on_boundary.push_back({Vec{std::cos(a), std::sin(a)}, 1.0 + 0.1 * j});
  }
  const auto g = SourceFunction::point_masses(on_boundary);
  std::vector<double> ns, logs;
  for (int n = 0; n <= 6; ++n) {
    const auto s = theorem41_terms(g, n, disk, 2.0, CubeSumMode::tripled);
    ns.push_back(n);
    logs.push_back(std::log2(s.term3));
  }
  const double exponent = -ls_slope(ns, logs);
  o.pass = std::isfinite(C) && unexplained == 0 && std::abs(exponent - 1.0) <= 0.3;
  o.detail = "empirical C=" + fmt("%.4g", C) + " over 100 f x n=0..6 (" + std::to_string(unexplained) +
             " cases with zero right side and nonzero lhs); term3 decay exponent=" + fmt("%.4f", exponent) +
             " (1 +- 0.3)";
  return o;
}

std::string read_without_timestamp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
  return out;
}

std::filesystem::path single_json(const std::filesystem::path& dir) {
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") return e.path();
  return {};
}

Outcome criterion8() {
  Outcome o;
  const auto base = std::filesystem::temp_directory_path() / ("philab-accept-" + std::to_string(::getpid()));
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  const auto cfg = base / "ratio.toml";
  {
    std::ofstream os(cfg);
    os << "seed = 11\n[phi]\ntype = \"trace_free_quadratic\"\n"
          "[experiment]\ntrials = 6\nmax_count = 4\n[numerics]\ntol = 1e-7\n";
  }
  const auto run = [&](const std::string& tag, int threads) {
    const auto dir = base / tag;
    const std::string cmd = std::string(PHILAB_CLI_PATH) + " ratio --config " + cfg.string() + " --out " +
                            dir.string() + " --threads " + std::to_string(threads) + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    return std::make_pair(rc, single_json(dir));
  };
  const auto a = run("a", 1);
  const auto b = run("b", 1);
  const auto c = run("c", 8);
  bool ok = a.first == 0 && b.first == 0 && c.first == 0 && !a.second.empty() && !b.second.empty() &&
            !c.second.empty();
  bool same_ab = false, same_ac = false;
  if (ok) {
    const std::string ta = read_without_timestamp(a.second);
    same_ab = ta == read_without_timestamp(b.second);
    same_ac = ta == read_without_timestamp(c.second);
    ok = same_ab && same_ac && a.second.filename() == c.second.filename();
  }
  std::filesystem::remove_all(base);
  o.pass = ok;
  o.detail = std::string("repeat run identical=") + (same_ab ? "yes" : "no") +
             ", --threads 1 vs 8 identical=" + (same_ac ? "yes" : "no") + " (JSON minus timestamp)";
  return o;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cancellation exactness", criterion1},  {"reflection identity", criterion2},
      {"kernel asymptotics", criterion3},      {"necessity blow-up", criterion4},
      {"dyadic piece sums", criterion5},       {"discrete machinery", criterion6},
      {"empirical constant", criterion7},      {"reproducibility", criterion8}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %-24s %s  %s  [%.1fs]\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
