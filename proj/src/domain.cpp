#include "philab/domain.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "philab/error.hpp"

namespace philab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kCurveSamples = 2048;
constexpr double kOnBoundaryTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sgn(double x) { return (x > 0) - (x < 0); }

// Minimise f on [a, b] with Brent's method; returns the argmin.
template <class F>
double brent_argmin(F&& f, double a, double b) {
  const int bits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t iters = 200;
  return boost::math::tools::brent_find_minima(f, a, b, bits, iters).first;
}

// Root of f in [a, b] where f(a), f(b) have opposite signs.
template <class F>
double bracketed_root(F&& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3);
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

// All roots of f on a periodic/closed parameter interval, located by sign
// changes on a uniform sample and refined by TOMS 748.
template <class F>
std::vector<double> sampled_roots(F&& f, double lo, double hi, int samples) {
  std::vector<double> roots;
  const double h = (hi - lo) / samples;
  double t0 = lo, f0 = f(t0);
  for (int i = 1; i <= samples; ++i) {
    const double t1 = lo + i * h;
    const double f1 = f(t1);
    if (f0 == 0.0) roots.push_back(t0);
    else if (f0 * f1 < 0.0) roots.push_back(bracketed_root(f, t0, t1));
    t0 = t1;
    f0 = f1;
  }
  return roots;
}

}  // namespace

double BoundaryProfile::value(double theta) const {
  const double s = std::sin(frequency * theta);
  if (kind == Kind::cosine) return std::cos(frequency * theta);
  return std::pow(std::abs(s), 1.0 + beta);
}

double BoundaryProfile::derivative(double theta) const {
  const double k = frequency;
  if (kind == Kind::cosine) return -k * std::sin(k * theta);
  const double s = std::sin(k * theta);
  return (1.0 + beta) * std::pow(std::abs(s), beta) * sgn(s) * k * std::cos(k * theta);
}

double BoundaryProfile::derivative_bound() const {
  if (kind == Kind::cosine) return frequency;
  return (1.0 + beta) * frequency;
}

Domain Domain::ball(Vec center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("ball: radius must be positive");
  if (center.size() < 2 || center.size() > 3) throw ValidationError("ball: dimension must be 2 or 3");
  return Domain(BallShape{center, radius, false});
}

Domain Domain::ball_exterior(Vec center, double radius) {
  Domain d = ball(std::move(center), radius);
  std::get<BallShape>(d.shape_).exterior = true;
  return d;
}

Domain Domain::half_space(Vec normal, double offset) {
  const double n = normal.norm();
  if (normal.size() < 2 || normal.size() > 3) throw ValidationError("half-space: dimension must be 2 or 3");
  if (std::abs(n - 1.0) > 1e-12) throw ValidationError("half-space: normal must be a unit vector");
  return Domain(HalfSpaceShape{normal / n, offset});
}

Domain Domain::graph_disk(Vec center, double radius, double amplitude, BoundaryProfile profile) {
  if (center.size() != 2) throw ValidationError("graph disk: only d = 2 is supported");
  if (!(radius > 0.0)) throw ValidationError("graph disk: radius must be positive");
  if (profile.frequency < 1) throw ValidationError("graph disk: frequency must be positive");
  if (!(profile.beta > 0.0 && profile.beta <= 1.0)) throw ValidationError("graph disk: beta must lie in (0, 1]");
  if (std::abs(amplitude) >= 1.0 || std::abs(amplitude) * profile.derivative_bound() >= 1.0)
    throw ValidationError("graph disk: perturbation too large (need |a| sup|s'| < 1)");
  return Domain(GraphDiskShape{center, radius, amplitude, profile});
}

int Domain::dim() const {
  return std::visit(overloaded{[](const BallShape& b) { return b.center.size(); },
                               [](const HalfSpaceShape& h) { return h.normal.size(); },
                               [](const GraphDiskShape&) { return 2; }},
                    shape_);
}

bool Domain::bounded() const {
  if (auto b = std::get_if<BallShape>(&shape_)) return !b->exterior;
  return !std::holds_alternative<HalfSpaceShape>(shape_);
}

std::string Domain::kind() const {
  return std::visit(overloaded{[](const BallShape& b) { return std::string(b.exterior ? "ball_exterior" : "ball"); },
                               [](const HalfSpaceShape&) { return std::string("half_space"); },
                               [](const GraphDiskShape&) { return std::string("graph_disk"); }},
                    shape_);
}

double Domain::beta() const {
  if (auto g = std::get_if<GraphDiskShape>(&shape_)) return g->amplitude == 0.0 ? 1.0 : g->profile.beta;
  return 1.0;
}

double Domain::diameter() const {
  return std::visit(overloaded{[](const BallShape& b) {
                                 return b.exterior ? std::numeric_limits<double>::infinity() : 2.0 * b.radius;
                               },
                               [](const HalfSpaceShape&) { return std::numeric_limits<double>::infinity(); },
                               [](const GraphDiskShape& g) { return 2.0 * g.radius * (1.0 + std::abs(g.amplitude)); }},
                    shape_);
}

Box Domain::bounding_box() const {
  if (auto b = std::get_if<BallShape>(&shape_); b && !b->exterior) {
    Vec r(b->center.size());
    for (int i = 0; i < r.size(); ++i) r[i] = b->radius;
    return Box{b->center - r, b->center + r};
  }
  if (auto g = std::get_if<GraphDiskShape>(&shape_)) {
    Box box{g->center, g->center};
    for (int i = 0; i < kCurveSamples; ++i) {
      const Vec p = graph_point(kTwoPi * i / kCurveSamples);
      box = box_union(box, Box{p, p});
    }
    // Chord sagitta bound between samples.
    const double h = kTwoPi / kCurveSamples;
    return box.expanded(graph_speed_bound() * h);
  }
  throw ValidationError("unbounded domain has no bounding box");
}

double Domain::graph_radius(double theta) const {
  const auto& g = std::get<GraphDiskShape>(shape_);
  return g.radius * (1.0 + g.amplitude * g.profile.value(theta));
}

Vec Domain::graph_point(double theta) const {
  const auto& g = std::get<GraphDiskShape>(shape_);
  return g.center + polar_unit(theta) * graph_radius(theta);
}

Vec Domain::graph_tangent(double theta) const {
  const auto& g = std::get<GraphDiskShape>(shape_);
  const double r = graph_radius(theta);
  const double dr = g.radius * g.amplitude * g.profile.derivative(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  return Vec{dr * c - r * s, dr * s + r * c};
}

double Domain::graph_speed_bound() const {
  const auto& g = std::get<GraphDiskShape>(shape_);
  const double rmax = g.radius * (1.0 + std::abs(g.amplitude));
  const double drmax = g.radius * std::abs(g.amplitude) * g.profile.derivative_bound();
  return std::hypot(rmax, drmax);
}

double Domain::graph_nearest_parameter(const Vec& x) const {
  // Lipschitz-certified candidate set on a uniform sample, then Brent.
  const double h = kTwoPi / kCurveSamples;
  const double lip = graph_speed_bound();
  std::vector<double> dist(kCurveSamples);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCurveSamples; ++i) {
    dist[i] = distance(x, graph_point(h * i));
    best = std::min(best, dist[i]);
  }
  double best_t = 0.0, best_d = std::numeric_limits<double>::infinity();
  auto f = [&](double t) { return (x - graph_point(t)).squared_norm(); };
  for (int i = 0; i < kCurveSamples; ++i) {
    if (dist[i] - lip * h > best) continue;
    const double t = brent_argmin(f, h * (i - 1), h * (i + 1));
    const double d = std::sqrt(f(t));
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  return best_t;
}

double Domain::signed_distance(const Vec& x) const {
  return std::visit(
      overloaded{[&](const BallShape& b) {
                   const double s = distance(x, b.center) - b.radius;
                   return b.exterior ? -s : s;
                 },
                 [&](const HalfSpaceShape& h) { return h.offset - dot(x, h.normal); },
                 [&](const GraphDiskShape& g) {
                   const Vec rel = x - g.center;
                   const double d = distance(x, graph_point(graph_nearest_parameter(x)));
                   const double r = rel.norm();
                   if (r == 0.0) return -d;
                   const double inside = r - graph_radius(std::atan2(rel[1], rel[0]));
                   return inside < 0.0 ? -d : (inside > 0.0 ? d : 0.0);
                 }},
      shape_);
}

bool Domain::contains(const Vec& x) const {
  if (auto g = std::get_if<GraphDiskShape>(&shape_)) {
    const Vec rel = x - g->center;
    return rel.norm() < graph_radius(std::atan2(rel[1], rel[0]));
  }
  return signed_distance(x) < 0.0;
}

Vec Domain::inward_normal(const Vec& z) const {
  if (std::abs(signed_distance(z)) > kOnBoundaryTol) throw DomainError("inward_normal: point is not on the boundary");
  return std::visit(overloaded{[&](const BallShape& b) {
                                 return b.exterior ? normalized(z - b.center) : normalized(b.center - z);
                               },
                               [&](const HalfSpaceShape& h) { return h.normal; },
                               [&](const GraphDiskShape&) {
                                 const Vec t = graph_tangent(graph_nearest_parameter(z));
                                 return normalized(Vec{-t[1], t[0]});
                               }},
                    shape_);
}

Vec Domain::nearest_boundary_point(const Vec& x) const {
  return std::visit(overloaded{[&](const BallShape& b) {
                                 Vec rel = x - b.center;
                                 const double r = rel.norm();
                                 if (r == 0.0) rel = Vec::unit(x.size(), 0);
                                 else rel /= r;
                                 return b.center + rel * b.radius;
                               },
                               [&](const HalfSpaceShape& h) { return x - h.normal * (dot(x, h.normal) - h.offset); },
                               [&](const GraphDiskShape&) { return graph_point(graph_nearest_parameter(x)); }},
                    shape_);
}

bool Domain::box_meets_boundary(const Box& box) const {
  return std::visit(
      overloaded{[&](const BallShape& b) {
                   return box.distance_to(b.center) <= b.radius && b.radius <= box.max_distance_to(b.center);
                 },
                 [&](const HalfSpaceShape& h) {
                   double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                   for (int m = 0; m < box.corner_count(); ++m) {
                     const double v = dot(box.corner(static_cast<unsigned>(m)), h.normal) - h.offset;
                     lo = std::min(lo, v);
                     hi = std::max(hi, v);
                   }
                   return lo <= 0.0 && 0.0 <= hi;
                 },
                 [&](const GraphDiskShape&) {
                   const Vec c = box.center();
                   const double half_diag = 0.5 * box.diagonal();
                   if (std::abs(signed_distance(c)) > half_diag) return false;
                   bool any_in = false, any_out = false;
                   for (int m = 0; m < box.corner_count(); ++m) {
                     const double s = signed_distance(box.corner(static_cast<unsigned>(m)));
                     if (s == 0.0) return true;
                     (s < 0.0 ? any_in : any_out) = true;
                   }
                   if (any_in && any_out) return true;
                   // Certified scan: box distance along the curve is Lipschitz in theta.
                   const double h = kTwoPi / kCurveSamples;
                   const double lip = graph_speed_bound();
                   auto f = [&](double t) { return box.distance_to(graph_point(t)); };
                   for (int i = 0; i < kCurveSamples; ++i) {
                     const double v = f(h * i);
                     if (v == 0.0) return true;
                     if (v > 0.5 * lip * h) continue;
                     const double t = brent_argmin(f, h * (i - 1), h * (i + 1));
                     if (f(t) <= 1e-14) return true;
                   }
                   return false;
                 }},
      shape_);
}

Domain Domain::transformed(const Vec& origin, double scale) const {
  if (!(scale > 0.0)) throw ValidationError("domain transform: scale must be positive");
  return std::visit(overloaded{[&](const BallShape& b) {
                                 Domain out = ball((b.center - origin) * scale, b.radius * scale);
                                 std::get<BallShape>(out.shape_).exterior = b.exterior;
                                 return out;
                               },
                               [&](const HalfSpaceShape& h) {
                                 return half_space(h.normal, scale * (h.offset - dot(origin, h.normal)));
                               },
                               [&](const GraphDiskShape& g) {
                                 return graph_disk((g.center - origin) * scale, g.radius * scale, g.amplitude,
                                                   g.profile);
                               }},
                    shape_);
}

CurveRange Domain::boundary_range(const Vec& near, double radius) const {
  if (dim() != 2) throw ValidationError("boundary parametrisation is planar only");
  if (auto h = std::get_if<HalfSpaceShape>(&shape_)) {
    // t is arclength along the line from the foot point of the origin.
    const Vec tangent{-h->normal[1], h->normal[0]};
    const double t0 = dot(near, tangent);
    return CurveRange{t0 - radius, t0 + radius, false};
  }
  return CurveRange{0.0, kTwoPi, true};
}

Vec Domain::boundary_point(double t) const {
  return std::visit(overloaded{[&](const BallShape& b) { return b.center + polar_unit(t) * b.radius; },
                               [&](const HalfSpaceShape& h) {
                                 const Vec tangent{-h.normal[1], h.normal[0]};
                                 return h.normal * h.offset + tangent * t;
                               },
                               [&](const GraphDiskShape&) { return graph_point(t); }},
                    shape_);
}

std::vector<double> Domain::vertical_crossings(double x, double ylo, double yhi) const {
  std::vector<double> ys;
  std::visit(overloaded{[&](const BallShape& b) {
                          const double dx = x - b.center[0];
                          const double q = b.radius * b.radius - dx * dx;
                          if (q <= 0.0) return;
                          const double s = std::sqrt(q);
                          ys = {b.center[1] - s, b.center[1] + s};
                        },
                        [&](const HalfSpaceShape& h) {
                          if (h.normal[1] == 0.0) return;
                          ys = {(h.offset - h.normal[0] * x) / h.normal[1]};
                        },
                        [&](const GraphDiskShape& g) {
                          const double rmax = g.radius * (1.0 + std::abs(g.amplitude));
                          if (std::abs(x - g.center[0]) > rmax) return;
                          for (double t : sampled_roots([&](double t) { return graph_point(t)[0] - x; }, 0.0, kTwoPi,
                                                        kCurveSamples))
                            ys.push_back(graph_point(t)[1]);
                        }},
             shape_);
  std::erase_if(ys, [&](double y) { return !(y > ylo && y < yhi); });
  std::sort(ys.begin(), ys.end());
  return ys;
}

std::vector<double> Domain::x_breakpoints(const Box& box) const {
  std::vector<double> xs;
  const double xlo = box.lo[0], xhi = box.hi[0];
  std::visit(overloaded{[&](const BallShape& b) {
                          xs = {b.center[0] - b.radius, b.center[0] + b.radius};
                          for (double y : {box.lo[1], box.hi[1]}) {
                            const double dy = y - b.center[1];
                            const double q = b.radius * b.radius - dy * dy;
                            if (q <= 0.0) continue;
                            xs.push_back(b.center[0] - std::sqrt(q));
                            xs.push_back(b.center[0] + std::sqrt(q));
                          }
                        },
                        [&](const HalfSpaceShape& h) {
                          if (h.normal[1] == 0.0) {
                            xs = {h.offset / h.normal[0]};
                            return;
                          }
                          if (h.normal[0] == 0.0) return;
                          for (double y : {box.lo[1], box.hi[1]}) xs.push_back((h.offset - h.normal[1] * y) / h.normal[0]);
                        },
                        [&](const GraphDiskShape&) {
                          for (double t : sampled_roots([&](double t) { return graph_tangent(t)[0]; }, 0.0, kTwoPi,
                                                        kCurveSamples))
                            xs.push_back(graph_point(t)[0]);
                          for (double y : {box.lo[1], box.hi[1]})
                            for (double t : sampled_roots([&](double t) { return graph_point(t)[1] - y; }, 0.0,
                                                          kTwoPi, kCurveSamples))
                              xs.push_back(graph_point(t)[0]);
                        }},
             shape_);
  std::erase_if(xs, [&](double x) { return !(x > xlo && x < xhi); });
  std::sort(xs.begin(), xs.end());
  return xs;
}

double Domain::holder_constant_estimate(int boundary_samples, double window) const {
  if (dim() != 2 || !bounded()) return 0.0;
  const double b = beta();
  const CurveRange range = boundary_range(Vec{0.0, 0.0}, 1.0);
  double c = 0.0;
  for (int i = 0; i < boundary_samples; ++i) {
    const double t0 = range.lo + (range.hi - range.lo) * i / boundary_samples;
    const Vec z = boundary_point(t0);
    const Vec n = inward_normal(z);
    const Vec tau{-n[1], n[0]};
    for (int k = 1; k <= 64; ++k)
      for (double sign : {-1.0, 1.0}) {
        const double dt = sign * window * k / 64.0;
        const Vec w = boundary_point(t0 + dt) - z;
        const double y = dot(w, tau);
        if (std::abs(y) < 1e-12) continue;
        c = std::max(c, std::abs(dot(w, n)) / std::pow(std::abs(y), 1.0 + b));
      }
  }
  return c;
}

DyadicCube DyadicCube::containing(const Vec& x, int generation) {
  DyadicCube q;
  q.dim = x.size();
  q.generation = generation;
  for (int i = 0; i < q.dim; ++i) q.index[i] = static_cast<std::int64_t>(std::floor(std::ldexp(x[i], generation)));
  return q;
}

double DyadicCube::side() const { return std::ldexp(1.0, -generation); }

Vec DyadicCube::lower_corner() const {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = std::ldexp(static_cast<double>(index[i]), -generation);
  return v;
}

Vec DyadicCube::center() const {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = std::ldexp(static_cast<double>(index[i]) + 0.5, -generation);
  return v;
}

Box DyadicCube::box() const {
  const Vec lo = lower_corner();
  Vec hi = lo;
  for (int i = 0; i < dim; ++i) hi[i] += side();
  return Box{lo, hi};
}

Box DyadicCube::dilated(double lambda) const {
  const Vec c = center();
  const double h = 0.5 * lambda * side();
  Box b{c, c};
  return b.expanded(h);
}

DyadicCube DyadicCube::parent() const {
  DyadicCube p = *this;
  p.generation = generation - 1;
  for (int i = 0; i < dim; ++i) p.index[i] = index[i] >> 1;  // floor division for negatives
  return p;
}

std::vector<DyadicCube> DyadicCube::children() const {
  std::vector<DyadicCube> out;
  for (unsigned m = 0; m < (1u << dim); ++m) {
    DyadicCube c = *this;
    c.generation = generation + 1;
    for (int i = 0; i < dim; ++i) c.index[i] = 2 * index[i] + ((m >> i) & 1u);
    out.push_back(c);
  }
  return out;
}

bool DyadicCube::contains(const Vec& x) const {
  const Vec lo = lower_corner();
  const double s = side();
  for (int i = 0; i < dim; ++i)
    if (x[i] < lo[i] || x[i] >= lo[i] + s) return false;
  return true;
}

bool is_boundary_cube(const Domain& domain, const DyadicCube& cube) {
  return domain.box_meets_boundary(cube.dilated(cube.dim + 2.0));
}

bool is_boundary_cube(const Domain& domain, const Vec& center, double side) {
  const double h = 0.5 * (center.size() + 2.0) * side;
  return domain.box_meets_boundary(Box{center, center}.expanded(h));
}

}  // namespace philab
