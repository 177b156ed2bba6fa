#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "philab/domain.hpp"
#include "philab/integrate.hpp"
#include "philab/kernel.hpp"
#include "philab/source.hpp"

namespace philab {

/// |f|-masses of the dyadic subcubes of a root cube, by relative generation.
/// Coincident point masses are merged before taking absolute values.
class CubeMasses {
 public:
  CubeMasses(const SourceFunction& f, const DyadicCube& root);

  const DyadicCube& root() const { return root_; }
  /// Integral of |f| over the half-open cube.
  double mass(const DyadicCube& cube) const;
  double mass(const Box& box) const;
  /// Subcubes of generation root + m with nonzero mass, in index order.
  /// Returns nullopt when the continuous part would need more than `cube_cap` cubes.
  std::optional<std::map<DyadicCube, double>> generation(int m, std::size_t cube_cap = 1u << 18) const;
  /// Atoms of |f| inside box; the continuous part is split into cells of size about h.
  std::vector<PointMass> atoms(const Box& box, double h) const;
  bool has_continuous() const { return !continuous_.empty(); }

 private:
  DyadicCube root_;
  std::vector<PointMass> points_;  // merged, |mass| > 0
  SourceFunction continuous_;
};

/// Sum over generation-m dyadic subcubes Q' of Q (only Q' in the boundary
/// collection when boundary_only) of (int_{Q'} |f|)^p.
double energy(const SourceFunction& f, const DyadicCube& q, int m, bool boundary_only, const Domain& omega,
              double p);

struct EnergyLedger {
  DyadicCube root;
  double p = 2.0;
  /// Last generation computed; smaller than requested when a continuous
  /// source would need too many cubes.
  int m_max = 0;
  std::vector<double> full;      // E_{Q,m}
  std::vector<double> boundary;  // E^b_{Q,m}
  double l1_norm = 0.0;          // ||f||_{L1(Q)}
};

EnergyLedger energy_ledger(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p,
                           int m_max = 20);

struct TelescopeSums {
  double weighted = 0.0;
  double raw = 0.0;
};

/// Sums of (1-eps)^m (E^b_m - E^b_{m+1}) and of E^b_m - E^b_{m+1} for m < m_max.
/// Throws InvariantError if some E^b_{m+1} exceeds E^b_m.
TelescopeSums telescope_energy_sum(const EnergyLedger& ledger, double eps);
TelescopeSums telescope_energy_sum(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p,
                                   double eps, int m_max = 20);

/// Largest eps with (1 - eps) >= (1 - delta)^{1-p} / 2.
double chain_epsilon(double delta, double p);

struct CubeChain {
  std::vector<DyadicCube> cubes;
  std::vector<double> masses;
  /// First m with masses[m+1] < (1 - delta) masses[m]; empty when the mass never decays.
  std::optional<int> stop_index;
  double delta = 0.2;
  double epsilon = 0.0;
  Vec c0;
  /// True when the chain reached the generation cap instead of running out of boundary children.
  bool reached_cap = false;

  /// max over m and x in R_m of |x - c0| / (2^{-m} l(R_0)).
  double containment_constant() const;
  /// ||f||_{L1(Q)} <= (1-delta)^{-m} ||f||_{L1(R_m)} for m <= M.
  bool mass_bound_holds() const;
};

inline constexpr int kChainGenerationCap = 40;

/// Greedy chain of boundary cubes maximising child mass; ties go to the lowest child index.
CubeChain build_cube_chain(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double delta,
                           double p);

struct SecondCoreResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// rhs = 0 while lhs > 0.
  bool violation = false;
};

/// lhs = ||f||_{L1(Q)}^{p-1} l(Q)^{-1} inf_{c on the boundary} int_Q |x-c||f|,
/// rhs = sum_m (1-eps)^m (E^b_m - E^b_{m+1}).
SecondCoreResult second_core_ratio(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p,
                                   double eps, double delta, int m_max = 20);

/// min over c of sum w_i |x_i - c| (weighted geometric median).
double free_infimum(const std::vector<PointMass>& atoms);
/// min over boundary points c of sum w_i |x_i - c|, with optional extra candidates.
double boundary_infimum(const std::vector<PointMass>& atoms, const Domain& omega,
                        const std::vector<Vec>& extra_candidates = {});

struct NewSimpleResult {
  double p = 2.0;
  double min_ratio = 0.0;
  std::vector<double> argmin;  // Z, z_1, ..., z_n
  std::size_t used = 0;
};

/// Empirical minimum of [(Z + sum z)^p - sum z^p] / [(Z + sum z)^{p-1} (Z + min_i sum_{j != i} z_j)].
std::vector<NewSimpleResult> new_simple_probe(std::size_t trials, int n_max, const std::vector<double>& p_list,
                                              std::uint64_t seed);
double new_simple_ratio(double p, double big_z, const std::vector<double>& z);

enum class CubeSumMode { tripled, plain };

struct Theorem41Sides {
  int n = 0;
  double lhs = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  bool warning = false;
};

/// Both sides of the cube-sum bound for the piece K_{n+1}.
Theorem41Sides theorem41_sides(const SourceFunction& f, int n, const Domain& omega, const HomogeneousKernel& kernel,
                               const PhiIntegrand& phi, CubeSumMode mode = CubeSumMode::tripled,
                               const IntegrationSettings& settings = {});
/// Right-hand side only (no integration).
Theorem41Sides theorem41_terms(const SourceFunction& f, int n, const Domain& omega, double p,
                               CubeSumMode mode = CubeSumMode::tripled);

struct SeriesTerm {
  int n = 0;
  double value = 0.0;  // signed integral
  double term = 0.0;   // |value|
  double cumulative = 0.0;
  double ratio = 0.0;  // cumulative / ||f||_1^p
  bool warning = false;
};

struct SeriesResult {
  std::vector<SeriesTerm> terms;
  double sum = 0.0;
  double l1_norm = 0.0;
  double ratio = 0.0;
  bool warning = false;
};

/// sum_n |int_Omega Phi(K_n * f)| over n_lo..n_hi.
SeriesResult besov_sum(const SourceFunction& f, const Domain& omega, const HomogeneousKernel& kernel,
                       const PhiIntegrand& phi, int n_lo, int n_hi, const IntegrationSettings& settings = {});

/// sum_n int_Omega M_p(|K_{<=n} * f|, |K_{n+1} * f|) over n_lo..n_hi.
SeriesResult mp_interaction_sum(const SourceFunction& f, const Domain& omega, const HomogeneousKernel& kernel,
                                double p, int n_lo, int n_hi, const IntegrationSettings& settings = {});

struct TelescopeDecomposition {
  struct Row {
    int n = 0;
    double term = 0.0;         // |int Phi(K_{<=n+1} f) - Phi(K_{<=n} f)|
    double piece = 0.0;        // |int Phi(K_{n+1} f)|
    double interaction = 0.0;  // int M_p(|K_{<=n} f|, |K_{n+1} f|)
  };
  std::vector<Row> rows;
  double remainder = 0.0;  // |int Phi(K_{<=0} f)|
  double target = 0.0;     // |int Phi(K_{<=N+1} f)|
  bool warning = false;
};

TelescopeDecomposition telescope_decomposition(const SourceFunction& f, const Domain& omega,
                                               const HomogeneousKernel& kernel, const PhiIntegrand& phi, int n_max,
                                               const IntegrationSettings& settings = {});

}  // namespace philab
