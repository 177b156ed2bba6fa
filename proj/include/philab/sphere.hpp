#pragma once

#include <vector>

#include "philab/domain.hpp"
#include "philab/kernel.hpp"
#include "philab/vec.hpp"

namespace philab {

/// Quadrature rule on S^{d-1}, d in {2, 3}.
///
/// d = 2: composite trapezoid in angle. d = 3: Gauss-Legendre in t = cos(polar),
/// split at the equator, times trapezoid in azimuth. Both kinds can be rotated
/// so that a given axis is a node (d = 2) or the pole (d = 3); then the great
/// circle orthogonal to the axis is exactly a node set or a panel boundary.
class SphereRule {
 public:
  static SphereRule circle(int nodes, double phase = 0.0);
  static SphereRule product(int polar_nodes_per_half, int azimuth_nodes, const Vec& axis = Vec{0.0, 0.0, 1.0});
  /// Default rule with roughly `resolution` nodes.
  static SphereRule for_dim(int dim, int resolution);

  /// Same rule rotated so that `axis` plays the role of the pole.
  SphereRule aligned_to(const Vec& axis) const;

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  /// Degree of exactness: trigonometric degree (d = 2) or spherical-harmonic degree (d = 3).
  int order() const { return order_; }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const;
  /// Rule with twice the resolution in every direction.
  SphereRule refined() const;

 private:
  SphereRule() = default;
  void build();

  int dim_ = 2;
  int n_primary_ = 0;    // circle nodes, or polar nodes per half
  int n_azimuth_ = 0;    // d = 3 only
  double phase_ = 0.0;   // d = 2 only
  Vec axis_;             // d = 3 only
  int order_ = 0;
  std::vector<Vec> nodes_;
  std::vector<double> weights_;
};

/// Sum of w_i g(zeta_i) in node order. Throws ValidationError when dim differs from the rule.
double sphere_integral(int dim, const ScalarMap& g, const SphereRule& rule);

/// zeta -> Phi(sign * K(zeta)).
ScalarMap phi_of_kernel(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int sign);

/// Integral of Phi(sign K) over the open hemisphere <zeta, xi> > 0. Nodes within
/// 1e-14 of the equator carry half weight.
double hemisphere_functional(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int sign, const Vec& xi,
                             const SphereRule& rule);

struct CancellationReport {
  int dim = 2;
  std::vector<Vec> xi_grid;
  std::vector<double> values_plus;
  std::vector<double> values_minus;
  double full_plus = 0.0;
  double full_minus = 0.0;
  /// Integral of |Phi(K)| over the sphere (scale for the relative tolerance).
  double abs_integral = 0.0;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Hemisphere functionals over an xi grid (equispaced on S^1, Fibonacci on S^2)
/// plus the two full-sphere integrals. tol <= 0 selects 1e-8 * abs_integral.
CancellationReport cancellation_sweep(const HomogeneousKernel& kernel, const PhiIntegrand& phi, int xi_count,
                                      const SphereRule& rule, double tol = 0.0, int threads = 1);

/// Integral of Phi(sign K) over S^{d-1} intersected with rho^{-1}(Omega - z).
double psi_profile(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel, const PhiIntegrand& phi,
                   int sign, double rho, const SphereRule& rule);

}  // namespace philab
