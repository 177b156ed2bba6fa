#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "philab/convolution.hpp"
#include "philab/domain.hpp"
#include "philab/kernel.hpp"
#include "philab/source.hpp"

namespace philab {

struct IntegrationSettings {
  enum class Method { automatic, plane, cells };

  /// Relative tolerance (against the integral of |integrand| on each panel).
  double tol = 1e-8;
  Method method = Method::automatic;
  /// Bisection depth cap of the adaptive Gauss-Kronrod panels (plane method).
  int max_depth = 14;
  /// Depth cap and Gauss order of the cell method.
  int cell_depth = 7;
  int cell_gauss = 3;
  /// Truncation radius for unbounded domains; 0 selects it from the tail bound.
  double truncation_radius = 0.0;
  /// Constant C in the tail bound C R^{-p}; 0 selects the default estimate.
  double tail_constant = 0.0;
  /// Point masses under a window reaching the origin are regularised by
  /// cutting the window at 2^{-pv_level-1}.
  int pv_level = 14;
  ConvolutionSettings conv;
  int threads = 1;
};

struct IntegrationResult {
  double value = 0.0;
  bool warning = false;
  double truncation_radius = 0.0;
  bool principal_value = false;
};

/// Geometry of an integrand, used to place panel breaks.
struct IntegrandHints {
  struct Circle {
    Vec center;
    double radius = 0.0;
  };
  struct Grading {
    Vec center;
    double r_min = 0.0;
    double r_max = 0.0;
  };
  /// Circles across which the integrand is not smooth.
  std::vector<Circle> circles;
  /// Dyadic rings r_min 2^k <= r_max around centers of rapid variation.
  std::vector<Grading> grading;
  /// Integrand vanishes outside this box.
  std::optional<Box> support_box;
  /// Optional exact support test; must be constant between hint circles.
  std::function<bool(const Vec&)> maybe_nonzero;
};

/// Integral of g over region intersected with box.
IntegrationResult integrate_region(const Region& region, const Box& box, const ScalarMap& g,
                                   const IntegrandHints& hints, const IntegrationSettings& settings);

/// Integrand built from convolutions K_W * f for a list of windows W.
struct FieldIntegrand {
  HomogeneousKernel kernel;
  SourceFunction source;
  std::vector<RadialWindow> windows;
  std::function<double(const std::vector<Vec>&)> combine;
  /// The integrand vanishes wherever all of these convolutions vanish; empty means no such bound.
  std::vector<int> support_windows;
  /// Power p for the tail bound on unbounded regions.
  double tail_power = 2.0;
  double tail_phi_sup = 1.0;
};

IntegrationResult integrate_field(const Region& region, const FieldIntegrand& field,
                                  const IntegrationSettings& settings);

/// Phi(sign * K_W * f).
struct FieldSpec {
  HomogeneousKernel kernel;
  RadialWindow window;
  SourceFunction source;
  PhiIntegrand phi;
  int sign = 1;
};

/// Integral over the domain of Phi(sign K_W * f). Unbounded domains with an
/// unbounded window require mean-zero f.
IntegrationResult integrate_over_domain(const Region& region, const FieldSpec& spec,
                                        const IntegrationSettings& settings = {});
IntegrationResult integrate_over_domain(const Domain& domain, const FieldSpec& spec,
                                        const IntegrationSettings& settings = {});

}  // namespace philab
