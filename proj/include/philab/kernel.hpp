#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "philab/sphere_table.hpp"
#include "philab/vec.hpp"

namespace philab {

using SphereVectorMap = std::function<Vec(const Vec&)>;
using ScalarMap = std::function<double(const Vec&)>;

/// Positively (alpha - d)-homogeneous kernel R^d \ {0} -> R^l, determined by
/// its restriction to the unit sphere.
class HomogeneousKernel {
 public:
  HomogeneousKernel(int dim, int target_dim, double alpha, SphereVectorMap sphere_map, std::string name,
                    std::optional<double> lipschitz_hint = std::nullopt);

  int dim() const { return dim_; }
  int target_dim() const { return target_dim_; }
  double alpha() const { return alpha_; }
  /// alpha - d
  double degree() const { return alpha_ - dim_; }
  const std::string& name() const { return name_; }
  std::optional<double> lipschitz_hint() const { return lipschitz_hint_; }

  Vec on_sphere(const Vec& zeta) const { return (*sphere_map_)(zeta); }
  /// |x|^{alpha-d} * sphere_map(x/|x|); throws DomainError at the origin.
  Vec operator()(const Vec& x) const;

  /// sup of |sphere_map| over a dense sample of the sphere.
  double sphere_sup() const { return sphere_sup_; }

  /// Kernel x -> K(R^{-1} x) for the planar rotation R by `angle` (d = 2).
  HomogeneousKernel rotated(double angle) const;

 private:
  int dim_;
  int target_dim_;
  double alpha_;
  std::shared_ptr<const SphereVectorMap> sphere_map_;
  std::string name_;
  std::optional<double> lipschitz_hint_;
  double sphere_sup_ = 0.0;
};

/// Positively p-homogeneous integrand R^l -> R.
class PhiIntegrand {
 public:
  /// From a sphere restriction: Phi(v) = |v|^p sphere_map(v/|v|).
  static PhiIntegrand from_sphere_map(int target_dim, double p, ScalarMap sphere_map, std::string name);
  /// From a closed-form evaluator that is already p-homogeneous on all of R^l.
  static PhiIntegrand from_homogeneous(int target_dim, double p, ScalarMap evaluator, std::string name);

  int target_dim() const { return target_dim_; }
  double p() const { return p_; }
  const std::string& name() const { return name_; }

  double operator()(const Vec& v) const;
  double on_sphere(const Vec& u) const;
  /// sup of |Phi| on the unit sphere (sampled).
  double sphere_sup() const { return sphere_sup_; }

 private:
  PhiIntegrand() = default;
  void finish();

  int target_dim_ = 0;
  double p_ = 1.0;
  bool homogeneous_form_ = false;
  std::shared_ptr<const ScalarMap> map_;
  std::string name_;
  double sphere_sup_ = 0.0;
};

/// Half-open radial window [inner, outer) applied to |x|.
struct RadialWindow {
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();

  bool contains(double r) const { return r >= inner && r < outer; }
  bool bounded() const { return outer < std::numeric_limits<double>::infinity(); }
  bool reaches_origin() const { return inner <= 0.0; }

  static RadialWindow full() { return {}; }
  /// Support of K_n: |x| in [2^{-n-1}, 2^{-n}).
  static RadialWindow piece(int n);
  /// Support of K_{<=n}: |x| >= 2^{-n-1}.
  static RadialWindow cumulative(int n);
};

/// Dyadic piece K_n or cumulative piece K_{<=n} of a kernel.
struct KernelPiece {
  enum class Mode { single, cumulative };

  HomogeneousKernel kernel;
  int n = 0;
  Mode mode = Mode::single;

  RadialWindow window() const {
    return mode == Mode::single ? RadialWindow::piece(n) : RadialWindow::cumulative(n);
  }
};

Vec kernel_eval(const HomogeneousKernel& kernel, const Vec& x);
/// K(x) restricted to a radial window; zero outside (including x = 0 when excluded).
Vec windowed_kernel_eval(const HomogeneousKernel& kernel, const RadialWindow& window, const Vec& x);
Vec kernel_piece_eval(const KernelPiece& piece, const Vec& x);
double phi_eval(const PhiIntegrand& phi, const Vec& v);

/// Interaction function M_p(x, y) on the nonnegative quadrant.
double m_p(double p, double x, double y);

struct PerturbationProbe {
  double constant = 0.0;
  std::size_t pairs_used = 0;
};

/// Empirical sup of |Phi(a+b) - Phi(a)| / (|a|^{p-1}|b|) over random pairs.
/// b is drawn uniformly from the ball of radius |a|/2 and kept only when
/// constraint_factor * |b| <= |a|, so a larger factor probes a subset of the
/// same sample.
PerturbationProbe phi_perturbation_probe(const PhiIntegrand& phi, std::size_t trials, std::uint64_t seed,
                                         double constraint_factor = 2.0);

/// Throws ValidationError unless p (d - alpha) = d. Uses an exact integer
/// comparison when alpha and p are both small rationals.
void check_homogeneity(int dim, double alpha, double p);

namespace builtin {

/// zeta -> zeta, i.e. K(x) = |x|^{alpha-d} x/|x|.
HomogeneousKernel identity_kernel(int dim, double alpha);
/// Gradient of the Laplace fundamental solution: x / (sigma_{d-1} |x|^d).
HomogeneousKernel riesz_gradient_kernel(int dim);

struct FourierSeries {
  double constant = 0.0;
  std::vector<double> cos;  // coefficient of cos((k+1) theta)
  std::vector<double> sin;  // coefficient of sin((k+1) theta)

  double operator()(double theta) const;
};
/// Planar kernel whose component i on the circle is series[i](theta).
HomogeneousKernel fourier_kernel(double alpha, std::vector<FourierSeries> components);
HomogeneousKernel table_kernel(double alpha, SphereTable table);

/// v1^2 - v2^2 on R^2.
PhiIntegrand trace_free_quadratic_phi();
/// v^T A v; A is row-major l x l.
PhiIntegrand quadratic_phi(int target_dim, std::vector<double> matrix);
/// |v|^p
PhiIntegrand norm_power_phi(int target_dim, double p);
/// v1 |v|^{p-1}
PhiIntegrand first_component_phi(int target_dim, double p);
/// |v|^p * series(arg v) on R^2.
PhiIntegrand angular_phi(double p, FourierSeries series);
PhiIntegrand table_phi(double p, SphereTable table);

}  // namespace builtin

}  // namespace philab
