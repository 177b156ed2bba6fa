#include "philab/sphere.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "philab/error.hpp"
#include "philab/parallel.hpp"
#include "philab/quadrature.hpp"
#include "philab/sampling.hpp"

namespace philab {

namespace {

constexpr double kEquatorBand = 1e-14;

// Orthonormal pair spanning axis^perp. Depends only on the line through the
// axis, so rules aligned to xi and -xi share their node set.
std::pair<Vec, Vec> perpendicular_frame(const Vec& axis) {
  Vec a = axis;
  for (int i = 0; i < 3; ++i) {
    if (a[i] != 0.0) {
      if (a[i] < 0.0) a = -a;
      break;
    }
  }
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(a[i]) < std::abs(a[k])) k = i;
  Vec e = Vec::unit(3, k);
  Vec u = normalized(e - a * dot(e, a));
  Vec v{a[1] * u[2] - a[2] * u[1], a[2] * u[0] - a[0] * u[2], a[0] * u[1] - a[1] * u[0]};
  return {u, v};
}

}  // namespace

SphereRule SphereRule::circle(int nodes, double phase) {
  if (nodes < 4) throw ValidationError("sphere rule: need at least 4 nodes");
  SphereRule r;
  r.dim_ = 2;
  r.n_primary_ = nodes;
  r.phase_ = phase;
  r.build();
  return r;
}

SphereRule SphereRule::product(int polar_nodes_per_half, int azimuth_nodes, const Vec& axis) {
  if (polar_nodes_per_half < 1 || azimuth_nodes < 4) throw ValidationError("sphere rule: resolution too small");
  if (axis.size() != 3) throw ValidationError("sphere rule: product axis must be in R^3");
  SphereRule r;
  r.dim_ = 3;
  r.n_primary_ = polar_nodes_per_half;
  r.n_azimuth_ = azimuth_nodes;
  r.axis_ = normalized(axis);
  r.build();
  return r;
}

SphereRule SphereRule::for_dim(int dim, int resolution) {
  if (dim == 2) return circle(resolution);
  if (dim == 3) {
    const int m = std::max(2, static_cast<int>(std::lround(std::sqrt(resolution / 8.0))));
    return product(m, 4 * m);
  }
  throw ValidationError("sphere rule: dimension must be 2 or 3");
}

void SphereRule::build() {
  nodes_.clear();
  weights_.clear();
  if (dim_ == 2) {
    const double h = 2.0 * M_PI / n_primary_;
    for (int i = 0; i < n_primary_; ++i) {
      nodes_.push_back(polar_unit(phase_ + h * i));
      weights_.push_back(h);
    }
    order_ = n_primary_ - 1;
    return;
  }
  const GaussRule& g = gauss_legendre(n_primary_);
  const auto [u, v] = perpendicular_frame(axis_);
  const double h = 2.0 * M_PI / n_azimuth_;
  for (double half : {-0.5, 0.5}) {
    for (int i = 0; i < g.size(); ++i) {
      const double t = half + 0.5 * g.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int j = 0; j < n_azimuth_; ++j) {
        const double phi = h * j;
        nodes_.push_back(u * (s * std::cos(phi)) + v * (s * std::sin(phi)) + axis_ * t);
        weights_.push_back(0.5 * g.weights[i] * h);
      }
    }
  }
  order_ = std::min(2 * n_primary_ - 1, n_azimuth_ - 1);
}

SphereRule SphereRule::aligned_to(const Vec& axis) const {
  if (axis.size() != dim_) throw ValidationError("sphere rule: axis dimension mismatch");
  SphereRule r = *this;
  if (dim_ == 2) r.phase_ = std::atan2(axis[1], axis[0]);
  else r.axis_ = normalized(axis);
  r.build();
  return r;
}

double SphereRule::total_weight() const {
  CompensatedSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

SphereRule SphereRule::refined() const {
  SphereRule r = *this;
  r.n_primary_ *= 2;
  r.n_azimuth_ *= 2;
  r.build();
  return r;
}

double sphere_integral(int dim, const ScalarMap& g, const SphereRule& rule) {
  if (dim != rule.dim()) throw ValidationError("sphere_integral: dimension mismatch between function and rule");
  CompensatedSum s;
  for (int i = 0; i < rule.size(); ++i) s.add(rule.weights()[i] * g(rule.nodes()[i]));
  return s.value();
}

ScalarMap phi_of_kernel(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int sign) {
  if (kernel.target_dim() != phi.target_dim())
    throw ValidationError("kernel target dimension does not match the integrand");
  const double s = sign < 0 ? -1.0 : 1.0;
  return [kernel, phi, s](const Vec& zeta) { return phi(kernel.on_sphere(zeta) * s); };
}

double hemisphere_functional(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int sign, const Vec& xi,
                             const SphereRule& rule) {
  if (xi.size() != kernel.dim() || rule.dim() != kernel.dim())
    throw ValidationError("hemisphere_functional: dimension mismatch");
  const ScalarMap g = phi_of_kernel(kernel, phi, sign);
  const Vec axis = normalized(xi);
  const SphereRule aligned = rule.aligned_to(axis);
  CompensatedSum s;
  for (int i = 0; i < aligned.size(); ++i) {
    const Vec& zeta = aligned.nodes()[i];
    const double c = dot(zeta, axis);
    if (c < -kEquatorBand) continue;
    const double w = c > kEquatorBand ? aligned.weights()[i] : 0.5 * aligned.weights()[i];
    s.add(w * g(zeta));
  }
  return s.value();
}

CancellationReport cancellation_sweep(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int xi_count,
                                      const SphereRule& rule, double tol, int threads) {
  if (xi_count < 1) throw ValidationError("cancellation_sweep: xi_count must be positive");
  CancellationReport rep;
  rep.dim = kernel.dim();
  rep.xi_grid = sphere_samples(rep.dim, xi_count);
  rep.values_plus.assign(rep.xi_grid.size(), 0.0);
  rep.values_minus.assign(rep.xi_grid.size(), 0.0);
  parallel_for(rep.xi_grid.size(), Execution{threads}, [&](std::size_t i) {
    rep.values_plus[i] = hemisphere_functional(kernel, phi, +1, rep.xi_grid[i], rule);
    rep.values_minus[i] = hemisphere_functional(kernel, phi, -1, rep.xi_grid[i], rule);
  });
  const ScalarMap plus = phi_of_kernel(kernel, phi, +1);
  const ScalarMap minus = phi_of_kernel(kernel, phi, -1);
  rep.full_plus = sphere_integral(rep.dim, plus, rule);
  rep.full_minus = sphere_integral(rep.dim, minus, rule);
  rep.abs_integral = std::max(sphere_integral(rep.dim, [&](const Vec& z) { return std::abs(plus(z)); }, rule),
                              sphere_integral(rep.dim, [&](const Vec& z) { return std::abs(minus(z)); }, rule));
  rep.tolerance = tol > 0.0 ? tol : 1e-8 * rep.abs_integral;
  double m = std::max(std::abs(rep.full_plus), std::abs(rep.full_minus));
  for (std::size_t i = 0; i < rep.xi_grid.size(); ++i)
    m = std::max({m, std::abs(rep.values_plus[i]), std::abs(rep.values_minus[i])});
  rep.max_abs = m;
  rep.pass = m <= rep.tolerance;
  return rep;
}

double psi_profile(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel, const PhiIntegrand& phi,
                   int sign, double rho, const SphereRule& rule) {
  if (!(rho > 0.0)) throw DomainError("psi_profile: rho must be positive");
  if (domain.dim() != kernel.dim() || z.size() != kernel.dim()) throw ValidationError("psi_profile: dimension mismatch");
  const ScalarMap g = phi_of_kernel(kernel, phi, sign);

  if (kernel.dim() == 3) {
    CompensatedSum s;
    for (int i = 0; i < rule.size(); ++i)
      if (domain.contains(z + rule.nodes()[i] * rho)) s.add(rule.weights()[i] * g(rule.nodes()[i]));
    return s.value();
  }

  // d = 2: locate the arcs of the circle inside the dilated domain, then
  // integrate the smooth integrand on each arc with Gauss-Legendre panels.
  const int n = rule.size();
  const double h = 2.0 * M_PI / n;
  auto sd = [&](double t) { return domain.signed_distance(z + polar_unit(t) * rho); };
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) vals[i] = i < n ? sd(h * i) : vals[0];
  std::vector<double> cuts;
  for (int i = 0; i < n; ++i) {
    const double a = vals[i], b = vals[i + 1];
    if ((a < 0.0) == (b < 0.0)) continue;
    std::uintmax_t iters = 100;
    auto tolr = boost::math::tools::eps_tolerance<double>(50);
    auto r = boost::math::tools::toms748_solve(sd, h * i, h * (i + 1), a, b, tolr, iters);
    cuts.push_back(0.5 * (r.first + r.second));
  }
  auto arc = [&](double a, double b) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (8.0 * h))));
    const double w = (b - a) / panels;
    CompensatedSum s;
    for (int k = 0; k < panels; ++k)
      s.add(gauss_integrate([&](double t) { return g(polar_unit(t)); }, a + k * w, a + (k + 1) * w, 8));
    return s.value();
  };
  if (cuts.empty()) return vals[0] < 0.0 ? arc(0.0, 2.0 * M_PI) : 0.0;
  CompensatedSum total;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + 2.0 * M_PI;
    const double mid = 0.5 * (a + b);
    if (domain.contains(z + polar_unit(mid) * rho)) total.add(arc(a, b));
  }
  return total.value();
}

}  // namespace philab
