#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "philab/domain.hpp"
#include "philab/integrate.hpp"
#include "philab/kernel.hpp"
#include "philab/quadrature.hpp"
#include "philab/source.hpp"

namespace philab {

struct ExperimentResult {
  std::string id;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string parameter_name = "n";
  std::string value_name = "value";
  /// (parameter, value) pairs.
  std::vector<std::pair<double, double>> series;
  /// Least-squares fit of value against the declared transform of the parameter.
  std::optional<LineFit> fit;
  std::string fit_transform;
  double reference = 0.0;
  double deviation = 0.0;
  bool pass = false;
  bool warning = false;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  /// Full CSV table.
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct BlowupSettings {
  enum class Variant { bounded, half_space, far_translation };
  Variant variant = Variant::bounded;
  /// Boundary point z (bounded variant); ignored for the half-space variants.
  Vec boundary_point;
  std::vector<double> n_list{16, 32, 64, 128, 256, 512, 1024};
  /// Distance of the test function from the boundary in units of 1/n; defaults
  /// to 2 (bounded) and 1 (half-space).
  std::optional<double> offset;
  /// Bounded variant: evaluate through the radial profile and check against
  /// plain 2-d quadrature at these n (empty: first, middle and last of n_list).
  bool radial = true;
  std::vector<double> cross_check_n;
  double cross_check_tol = 0.01;
  int psi_nodes = 1024;
  int sphere_nodes = 4096;
  IntegrationSettings integration;
};

/// Integral of Phi(K * f) over the domain along the family of scaled test
/// functions sitting at distance offset/n from the boundary; fits value vs log n.
ExperimentResult necessity_blowup(const Domain& domain, const HomogeneousKernel& kernel, const PhiIntegrand& phi,
                                  const BlowupSettings& settings);

/// Integral of Phi(K * f) over the domain for f_n placed at z + (offset/n) nu, in the
/// scaled form int_{n(Omega - z)} Phi(K * f(u - offset nu)) du.
struct BlowupValue {
  double value = 0.0;
  double near = 0.0;        // part inside B_4 (radial route)
  double correction = 0.0;  // outside B_4, minus Phi(K)
  double radial = 0.0;      // int_4 r^{-1} Psi(r / n) dr
  bool warning = false;
};
BlowupValue blowup_value_plane(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel,
                               const PhiIntegrand& phi, double n, double offset, const IntegrationSettings& settings);
BlowupValue blowup_value_radial(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel,
                                const PhiIntegrand& phi, double n, double offset, const IntegrationSettings& settings,
                                int psi_nodes = 1024);

struct SamplerSettings {
  enum class Kind { point_masses, boundary_bumps };
  Kind kind = Kind::point_masses;
  int max_count = 8;
  /// Sampling box for point masses; empty selects the domain's bounding box
  /// (or the unit box around the origin for a half-space).
  std::optional<Box> box;
  bool zero_mean = false;
  /// Boundary bumps: scales 2^U(0, log2 scale_cap), placed at z + (2/scale) nu(z).
  double scale_cap = 64.0;
};

/// Admissible random test function; zero mean is forced on unbounded domains.
SourceFunction sample_source(const Domain& domain, const SamplerSettings& sampler, std::mt19937_64& rng);

struct RatioSweepSettings {
  SamplerSettings sampler;
  int trials = 32;
  std::uint64_t seed = 1;
  IntegrationSettings integration;
};

/// max over sampled f of |int Phi(K * f)| / ||f||_1^p.
ExperimentResult inequality_ratio_sweep(const Domain& domain, const HomogeneousKernel& kernel,
                                        const PhiIntegrand& phi, const RatioSweepSettings& settings);

struct GradientDemoSettings {
  /// Point masses of Delta u.
  std::vector<PointMass> laplacian;
  /// Principal-value truncation levels N: the kernel is cut at 2^{-N-1} around each mass.
  std::vector<int> levels{6, 8, 10, 12, 14};
  IntegrationSettings integration;
};

/// int_Omega Phi(grad u) with grad u = K * Delta u, K(x) = x / (2 pi |x|^2).
ExperimentResult mazya_gradient_demo(const Domain& domain, const PhiIntegrand& phi,
                                     const GradientDemoSettings& settings);

}  // namespace philab
