#include "philab/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include <boost/math/tools/minima.hpp>

#include "philab/error.hpp"
#include "philab/quadrature.hpp"
#include "philab/sampling.hpp"

namespace philab {

namespace {

bool in_half_open(const Box& b, const Vec& x) {
  for (int i = 0; i < b.dim(); ++i)
    if (x[i] < b.lo[i] || x[i] >= b.hi[i]) return false;
  return true;
}

std::vector<PointMass> merged_points(const SourceFunction& f) {
  std::map<std::vector<double>, double> merged;
  for (const auto& p : f.points()) merged[p.location.to_vector()] += p.mass;
  std::vector<PointMass> out;
  for (const auto& [loc, m] : merged)
    if (m != 0.0) out.push_back(PointMass{Vec(loc), std::abs(m)});
  return out;
}

SourceFunction continuous_part(const SourceFunction& f) {
  SourceFunction c(f.dim());
  for (const auto& b : f.bumps()) c.add(SourceFunction::bump(b.center, b.scale, b.mass));
  for (const auto& g : f.grids()) c.add(SourceFunction::grid(g));
  return c;
}

double sum_distance(const std::vector<PointMass>& atoms, const Vec& c) {
  CompensatedSum s;
  for (const auto& a : atoms) s.add(a.mass * distance(a.location, c));
  return s.value();
}

Vec weighted_mean(const std::vector<PointMass>& atoms) {
  Vec c(atoms.front().location.size());
  double w = 0.0;
  for (const auto& a : atoms) {
    c = c + a.location * a.mass;
    w += a.mass;
  }
  return c / w;
}

// One Weiszfeld step; returns x unchanged if it sits on an atom.
Vec weiszfeld_step(const std::vector<PointMass>& atoms, const Vec& x) {
  Vec num(x.size());
  double den = 0.0;
  for (const auto& a : atoms) {
    const double r = distance(a.location, x);
    if (r < 1e-15) return x;
    num = num + a.location * (a.mass / r);
    den += a.mass / r;
  }
  return num / den;
}

}  // namespace

CubeMasses::CubeMasses(const SourceFunction& f, const DyadicCube& root)
    : root_(root), points_(merged_points(f)), continuous_(continuous_part(f)) {}

double CubeMasses::mass(const Box& box) const {
  CompensatedSum s;
  for (const auto& p : points_)
    if (in_half_open(box, p.location)) s.add(p.mass);
  if (!continuous_.empty() && !box_is_empty(box_intersection(box, continuous_.bounding_box())))
    s.add(continuous_.abs_mass_in(box));
  return s.value();
}

double CubeMasses::mass(const DyadicCube& cube) const { return mass(cube.box()); }

std::optional<std::map<DyadicCube, double>> CubeMasses::generation(int m, std::size_t cube_cap) const {
  const int g = root_.generation + m;
  const int d = root_.dim;
  std::map<DyadicCube, double> out;
  for (const auto& p : points_) {
    if (DyadicCube::containing(p.location, root_.generation).index != root_.index) continue;
    out[DyadicCube::containing(p.location, g)] += p.mass;
  }
  if (continuous_.empty()) return out;

  const Box support = box_intersection(continuous_.bounding_box(), root_.box());
  if (box_is_empty(support)) return out;
  std::array<std::int64_t, 3> lo{}, hi{};
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) {
    const std::int64_t first = root_.index[i] << m;
    const std::int64_t last = ((root_.index[i] + 1) << m) - 1;
    lo[i] = std::max(first, static_cast<std::int64_t>(std::floor(std::ldexp(support.lo[i], g))));
    hi[i] = std::min(last, static_cast<std::int64_t>(std::floor(std::ldexp(support.hi[i], g))));
    if (hi[i] < lo[i]) return out;
    count *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    if (count > cube_cap) return std::nullopt;
  }
  DyadicCube c{d, g, {}};
  std::array<std::int64_t, 3> j = lo;
  for (std::size_t k = 0; k < count; ++k) {
    c.index = j;
    const double w = continuous_.abs_mass_in(c.box());
    if (w > 0.0) out[c] += w;
    for (int i = d - 1; i >= 0; --i) {
      if (++j[i] <= hi[i]) break;
      j[i] = lo[i];
    }
  }
  return out;
}

std::vector<PointMass> CubeMasses::atoms(const Box& box, double h) const {
  std::vector<PointMass> out;
  for (const auto& p : points_)
    if (in_half_open(box, p.location)) out.push_back(p);
  if (!continuous_.empty()) {
    auto extra = continuous_.abs_atoms_in(box, h);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  return out;
}

double energy(const SourceFunction& f, const DyadicCube& q, int m, bool boundary_only, const Domain& omega,
              double p) {
  if (m < 0) throw ValidationError("energy: generation offset must be nonnegative");
  const auto cubes = CubeMasses(f, q).generation(m);
  if (!cubes) throw ValidationError("energy: continuous source needs too many subcubes at this generation");
  CompensatedSum s;
  for (const auto& [cube, w] : *cubes) {
    if (boundary_only && !is_boundary_cube(omega, cube)) continue;
    s.add(std::pow(w, p));
  }
  return s.value();
}

EnergyLedger energy_ledger(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p, int m_max) {
  EnergyLedger ledger;
  ledger.root = q;
  ledger.p = p;
  const CubeMasses masses(f, q);
  ledger.l1_norm = masses.mass(q);
  for (int m = 0; m <= m_max; ++m) {
    const auto cubes = masses.generation(m);
    if (!cubes) break;
    CompensatedSum all, bnd;
    for (const auto& [cube, w] : *cubes) {
      const double e = std::pow(w, p);
      all.add(e);
      if (is_boundary_cube(omega, cube)) bnd.add(e);
    }
    ledger.full.push_back(all.value());
    ledger.boundary.push_back(bnd.value());
    ledger.m_max = m;
  }
  return ledger;
}

TelescopeSums telescope_energy_sum(const EnergyLedger& ledger, double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw ValidationError("telescope_energy_sum: eps must lie in [0, 1/2)");
  CompensatedSum weighted, raw;
  double w = 1.0;
  for (int m = 0; m < ledger.m_max; ++m) {
    const double a = ledger.boundary[m];
    const double b = ledger.boundary[m + 1];
    double diff = a - b;
    if (diff < 0.0) {
      if (-diff > 1e-12 * a)
        throw InvariantError("boundary energy increased from generation " + std::to_string(m) + " to " +
                             std::to_string(m + 1));
      diff = 0.0;
    }
    raw.add(diff);
    weighted.add(w * diff);
    w *= 1.0 - eps;
  }
  return {weighted.value(), raw.value()};
}

TelescopeSums telescope_energy_sum(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p,
                                   double eps, int m_max) {
  return telescope_energy_sum(energy_ledger(f, q, omega, p, m_max), eps);
}

double chain_epsilon(double delta, double p) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("chain: delta must lie in (0, 1)");
  const double eps = 1.0 - 0.5 * std::pow(1.0 - delta, 1.0 - p);
  if (!(eps > 0.0)) throw ValidationError("chain: delta too large for this p, no admissible eps");
  return eps;
}

double CubeChain::containment_constant() const {
  double c = 0.0;
  for (const auto& q : cubes) c = std::max(c, q.box().max_distance_to(c0) / q.side());
  return c;
}

bool CubeChain::mass_bound_holds() const {
  if (masses.empty()) return true;
  const std::size_t last = stop_index ? static_cast<std::size_t>(*stop_index) : masses.size() - 1;
  for (std::size_t m = 0; m <= last && m < masses.size(); ++m)
    if (masses[0] > std::pow(1.0 - delta, -static_cast<double>(m)) * masses[m] * (1.0 + 1e-12)) return false;
  return true;
}

CubeChain build_cube_chain(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double delta,
                           double p) {
  if (!is_boundary_cube(omega, q)) throw ValidationError("chain: root cube is not a boundary cube");
  CubeChain chain;
  chain.delta = delta;
  chain.epsilon = chain_epsilon(delta, p);
  const CubeMasses masses(f, q);
  chain.cubes.push_back(q);
  chain.masses.push_back(masses.mass(q));

  while (chain.cubes.back().generation < kChainGenerationCap) {
    auto kids = chain.cubes.back().children();
    std::sort(kids.begin(), kids.end());
    std::optional<DyadicCube> best;
    double best_mass = -1.0;
    for (const auto& k : kids) {
      if (!is_boundary_cube(omega, k)) continue;
      const double w = masses.mass(k);
      if (w > best_mass) {
        best = k;
        best_mass = w;
      }
    }
    if (!best) break;
    chain.cubes.push_back(*best);
    chain.masses.push_back(best_mass);
  }
  chain.reached_cap = chain.cubes.back().generation >= kChainGenerationCap;
  chain.c0 = chain.reached_cap ? chain.cubes.back().center()
                               : omega.nearest_boundary_point(chain.cubes.back().center());

  for (std::size_t m = 0; m < chain.masses.size(); ++m) {
    const double next = m + 1 < chain.masses.size() ? chain.masses[m + 1] : 0.0;
    if (chain.masses[m] == 0.0 || next < (1.0 - delta) * chain.masses[m]) {
      if (m + 1 < chain.masses.size() || !chain.reached_cap) chain.stop_index = static_cast<int>(m);
      break;
    }
  }
  return chain;
}

double free_infimum(const std::vector<PointMass>& atoms) {
  if (atoms.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms) best = std::min(best, sum_distance(atoms, a.location));
  Vec x = weighted_mean(atoms);
  for (int it = 0; it < 200; ++it) {
    const Vec y = weiszfeld_step(atoms, x);
    const double moved = distance(x, y);
    x = y;
    if (moved < 1e-14) break;
  }
  return std::min(best, sum_distance(atoms, x));
}

double boundary_infimum(const std::vector<PointMass>& atoms, const Domain& omega,
                        const std::vector<Vec>& extra_candidates) {
  if (atoms.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  Vec best_point;
  auto consider = [&](const Vec& c) {
    const double v = sum_distance(atoms, c);
    if (v < best) {
      best = v;
      best_point = c;
    }
  };
  for (const auto& c : extra_candidates) consider(c);
  for (const auto& a : atoms) consider(omega.nearest_boundary_point(a.location));

  const int dim = omega.dim();
  constexpr int kSamples = 1024;
  if (dim == 2) {
    const Vec mean = weighted_mean(atoms);
    double spread = 0.0;
    for (const auto& a : atoms) spread = std::max(spread, distance(a.location, mean));
    const double reach = std::abs(omega.signed_distance(mean)) + 2.0 * spread + 1e-3;
    const CurveRange range = omega.boundary_range(mean, reach);
    const double h = (range.hi - range.lo) / kSamples;
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < kSamples; ++i) {
      const double t = range.lo + h * (i + 0.5);
      samples.emplace_back(sum_distance(atoms, omega.boundary_point(t)), t);
    }
    std::partial_sort(samples.begin(), samples.begin() + 4, samples.end());
    for (int k = 0; k < 4; ++k) {
      const double t0 = samples[k].second;
      auto g = [&](double t) { return sum_distance(atoms, omega.boundary_point(t)); };
      const auto [t, v] = boost::math::tools::brent_find_minima(g, t0 - h, t0 + h, 52);
      consider(omega.boundary_point(t));
    }
  } else if (omega.bounded()) {
    const auto& ball = std::get<BallShape>(omega.shape());
    for (const auto& u : sphere_samples(dim, kSamples)) consider(ball.center + u * ball.radius);
  }

  // Projected Weiszfeld polish.
  Vec x = best_point;
  for (int it = 0; it < 100; ++it) {
    const Vec y = omega.nearest_boundary_point(weiszfeld_step(atoms, x));
    const double moved = distance(x, y);
    consider(y);
    x = y;
    if (moved < 1e-14) break;
  }
  return best;
}

SecondCoreResult second_core_ratio(const SourceFunction& f, const DyadicCube& q, const Domain& omega, double p,
                                   double eps, double delta, int m_max) {
  const CubeMasses masses(f, q);
  const double total = masses.mass(q);
  if (total == 0.0) throw ValidationError("second_core_ratio: f vanishes on the cube");
  const CubeChain chain = build_cube_chain(f, q, omega, delta, p);
  const auto atoms = masses.atoms(q.box(), q.side() / 64.0);

  SecondCoreResult r;
  r.lhs = std::pow(total, p - 1.0) / q.side() * boundary_infimum(atoms, omega, {chain.c0});
  r.rhs = telescope_energy_sum(energy_ledger(f, q, omega, p, m_max), eps).weighted;
  if (r.rhs > 0.0) r.ratio = r.lhs / r.rhs;
  else r.violation = r.lhs > 0.0;
  return r;
}

double new_simple_ratio(double p, double big_z, const std::vector<double>& z) {
  double sum = big_z, powers = 0.0, largest = 0.0, rest = 0.0;
  for (double v : z) {
    sum += v;
    rest += v;
    powers += std::pow(v, p);
    largest = std::max(largest, v);
  }
  const double den = std::pow(sum, p - 1.0) * (big_z + (rest - largest));
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (std::pow(sum, p) - powers) / den;
}

std::vector<NewSimpleResult> new_simple_probe(std::size_t trials, int n_max, const std::vector<double>& p_list,
                                              std::uint64_t seed) {
  if (trials < 1) throw ValidationError("new_simple_probe: trials must be positive");
  if (n_max < 1) throw ValidationError("new_simple_probe: n_max must be positive");
  std::vector<NewSimpleResult> out;
  for (double p : p_list) out.push_back(NewSimpleResult{p, std::numeric_limits<double>::infinity(), {}, 0});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, n_max);
  auto draw = [&] {
    if (unit(rng) < 0.15) return 0.0;
    return unit(rng) * std::pow(10.0, -4.0 * unit(rng));
  };
  std::vector<double> z;
  for (std::size_t t = 0; t < trials; ++t) {
    const int n = count(rng);
    const double big_z = draw();
    z.assign(n, 0.0);
    for (auto& v : z) v = draw();
    for (auto& r : out) {
      const double ratio = new_simple_ratio(r.p, big_z, z);
      if (std::isnan(ratio)) continue;
      ++r.used;
      if (ratio < r.min_ratio) {
        r.min_ratio = ratio;
        r.argmin = {big_z};
        r.argmin.insert(r.argmin.end(), z.begin(), z.end());
      }
    }
  }
  return out;
}

Theorem41Sides theorem41_terms(const SourceFunction& f, int n, const Domain& omega, double p, CubeSumMode mode) {
  if (n < 0) throw ValidationError("theorem41: n must be nonnegative");
  Theorem41Sides s;
  s.n = n;
  if (f.empty()) return s;
  const double side = std::ldexp(1.0, -n);
  const Box support = f.bounding_box().expanded(side);
  const CubeMasses all(f, DyadicCube::containing(support.center(), 0));
  const auto atoms = all.atoms(support, side / 16.0);

  std::set<DyadicCube> cubes;
  const int d = f.dim();
  for (const auto& a : atoms) {
    const DyadicCube home = DyadicCube::containing(a.location, n);
    if (mode == CubeSumMode::plain) {
      cubes.insert(home);
      continue;
    }
    const int shifts = d == 2 ? 9 : 27;
    for (int k = 0; k < shifts; ++k) {
      DyadicCube c = home;
      int code = k;
      for (int i = 0; i < d; ++i, code /= 3) c.index[i] += code % 3 - 1;
      cubes.insert(c);
    }
  }

  const double beta = omega.beta();
  CompensatedSum t1, t2, t3;
  for (const auto& c : cubes) {
    const Box box = mode == CubeSumMode::tripled ? c.dilated(3.0) : c.box();
    std::vector<PointMass> inside;
    double w = 0.0;
    for (const auto& a : atoms)
      if (in_half_open(box, a.location)) {
        inside.push_back(a);
        w += a.mass;
      }
    if (w == 0.0) continue;
    const bool boundary = mode == CubeSumMode::tripled ? is_boundary_cube(omega, c.center(), 3.0 * side)
                                                        : is_boundary_cube(omega, c);
    const double lead = std::ldexp(1.0, n) * std::pow(w, p - 1.0);
    if (!boundary) {
      t1.add(lead * free_infimum(inside));
    } else {
      t2.add(lead * boundary_infimum(inside, omega));
      t3.add(std::pow(2.0, -beta * n) * std::pow(w, p));
    }
  }
  s.term1 = t1.value();
  s.term2 = t2.value();
  s.term3 = t3.value();
  return s;
}

Theorem41Sides theorem41_sides(const SourceFunction& f, int n, const Domain& omega, const HomogeneousKernel& kernel,
                               const PhiIntegrand& phi, CubeSumMode mode, const IntegrationSettings& settings) {
  Theorem41Sides s = theorem41_terms(f, n, omega, phi.p(), mode);
  const auto r = integrate_over_domain(omega, FieldSpec{kernel, RadialWindow::piece(n + 1), f, phi, 1}, settings);
  s.lhs = std::abs(r.value);
  s.warning = r.warning;
  return s;
}

namespace {

SeriesResult finish_series(std::vector<SeriesTerm> terms, double l1, double p) {
  SeriesResult out;
  out.l1_norm = l1;
  const double scale = std::pow(l1, p);
  CompensatedSum s;
  for (auto& t : terms) {
    s.add(t.term);
    t.cumulative = s.value();
    t.ratio = scale > 0.0 ? t.cumulative / scale : 0.0;
    out.warning = out.warning || t.warning;
  }
  out.sum = s.value();
  out.ratio = scale > 0.0 ? out.sum / scale : 0.0;
  out.terms = std::move(terms);
  return out;
}

double interaction_at(const SourceFunction& f, const Domain& omega, const HomogeneousKernel& kernel, double p, int n,
                      const IntegrationSettings& settings, bool& warning) {
  FieldIntegrand field{kernel,
                       f,
                       {RadialWindow::cumulative(n), RadialWindow::piece(n + 1)},
                       [p](const std::vector<Vec>& v) { return m_p(p, v[0].norm(), v[1].norm()); },
                       {1},
                       p,
                       1.0};
  const auto r = integrate_field(Region::of(omega), field, settings);
  warning = warning || r.warning;
  return r.value;
}

}  // namespace

SeriesResult besov_sum(const SourceFunction& f, const Domain& omega, const HomogeneousKernel& kernel,
                       const PhiIntegrand& phi, int n_lo, int n_hi, const IntegrationSettings& settings) {
  if (n_hi < n_lo) throw ValidationError("besov_sum: empty n range");
  std::vector<SeriesTerm> terms;
  for (int n = n_lo; n <= n_hi; ++n) {
    SeriesTerm t;
    t.n = n;
    if (!f.empty()) {
      const auto r = integrate_over_domain(omega, FieldSpec{kernel, RadialWindow::piece(n), f, phi, 1}, settings);
      t.value = r.value;
      t.warning = r.warning;
    }
    t.term = std::abs(t.value);
    terms.push_back(t);
  }
  return finish_series(std::move(terms), f.empty() ? 0.0 : f.l1_norm(), phi.p());
}

SeriesResult mp_interaction_sum(const SourceFunction& f, const Domain& omega, const HomogeneousKernel& kernel,
                                double p, int n_lo, int n_hi, const IntegrationSettings& settings) {
  if (n_hi < n_lo) throw ValidationError("mp_interaction_sum: empty n range");
  std::vector<SeriesTerm> terms;
  for (int n = n_lo; n <= n_hi; ++n) {
    SeriesTerm t;
    t.n = n;
    if (!f.empty()) t.value = interaction_at(f, omega, kernel, p, n, settings, t.warning);
    t.term = std::abs(t.value);
    terms.push_back(t);
  }
  return finish_series(std::move(terms), f.empty() ? 0.0 : f.l1_norm(), p);
}

TelescopeDecomposition telescope_decomposition(const SourceFunction& f, const Domain& omega,
                                               const HomogeneousKernel& kernel, const PhiIntegrand& phi, int n_max,
                                               const IntegrationSettings& settings) {
  TelescopeDecomposition out;
  if (f.empty()) {
    for (int n = 0; n <= n_max; ++n) out.rows.push_back({n, 0.0, 0.0, 0.0});
    return out;
  }
  auto whole = [&](const RadialWindow& w) {
    const auto r = integrate_over_domain(omega, FieldSpec{kernel, w, f, phi, 1}, settings);
    out.warning = out.warning || r.warning;
    return std::abs(r.value);
  };
  for (int n = 0; n <= n_max; ++n) {
    TelescopeDecomposition::Row row;
    row.n = n;
    FieldIntegrand diff{kernel,
                        f,
                        {RadialWindow::cumulative(n), RadialWindow::piece(n + 1)},
                        [&phi](const std::vector<Vec>& v) { return phi(v[0] + v[1]) - phi(v[0]); },
                        {1},
                        phi.p(),
                        phi.sphere_sup()};
    const auto r = integrate_field(Region::of(omega), diff, settings);
    out.warning = out.warning || r.warning;
    row.term = std::abs(r.value);
    row.piece = whole(RadialWindow::piece(n + 1));
    row.interaction = interaction_at(f, omega, kernel, phi.p(), n, settings, out.warning);
    out.rows.push_back(row);
  }
  out.remainder = whole(RadialWindow::cumulative(0));
  out.target = n_max < 0 ? out.remainder : whole(RadialWindow::cumulative(n_max + 1));
  return out;
}

}  // namespace philab
