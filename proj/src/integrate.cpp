#include "philab/integrate.hpp"

#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "philab/error.hpp"
#include "philab/parallel.hpp"
#include "philab/quadrature.hpp"

namespace philab {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Integrand value together with a bound for its absolute value; for nested
// integrals the second entry is the integral of |g| along the inner line.
struct ValueAbs {
  double value = 0.0;
  double abs = 0.0;
};

template <class F>
PanelEstimate gk15(F& f, double a, double b) {
  const auto& x = GK15::abscissa();
  const auto& wk = GK15::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const ValueAbs f0 = f(c);
  double k = f0.value * wk[0];
  double g = f0.value * wg[0];
  double l1 = f0.abs * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const ValueAbs fp = f(c + h * x[i]);
    const ValueAbs fm = f(c - h * x[i]);
    k += (fp.value + fm.value) * wk[i];
    l1 += (fp.abs + fm.abs) * wk[i];
    if (i % 2 == 0) g += (fp.value + fm.value) * wg[i / 2];
  }
  PanelEstimate e;
  e.value = k * h;
  e.error = std::max(std::abs(k - g) * h, 2.0 * std::numeric_limits<double>::epsilon() * l1 * h);
  e.l1 = l1 * h;
  return e;
}

template <class F>
ValueAbs adaptive(F& f, double a, double b, const PanelEstimate& est, double abs_tol, int depth, bool& warning) {
  if (est.error <= abs_tol) return {est.value, est.l1};
  if (depth <= 0) {
    warning = true;
    return {est.value, est.l1};
  }
  const double mid = 0.5 * (a + b);
  const PanelEstimate left = gk15(f, a, mid);
  const PanelEstimate right = gk15(f, mid, b);
  const ValueAbs l = adaptive(f, a, mid, left, 0.5 * abs_tol, depth - 1, warning);
  const ValueAbs r = adaptive(f, mid, b, right, 0.5 * abs_tol, depth - 1, warning);
  return {l.value + r.value, l.abs + r.abs};
}

// Adaptive Gauss-Kronrod after x = a + (b-a)(1-cos t)/2, which absorbs
// square-root behaviour at both ends (circle chords, tangencies).
// f returns ValueAbs.
template <class F>
class Graded {
 public:
  Graded(F& f, double a, double b) : f_(f), a_(a), b_(b) {}

  ValueAbs operator()(double t) const {
    const double x = a_ + 0.5 * (b_ - a_) * (1.0 - std::cos(t));
    const double jac = 0.5 * (b_ - a_) * std::sin(t);
    if (jac == 0.0) return {};
    const ValueAbs v = f_(x);
    return {jac * v.value, jac * v.abs};
  }
  PanelEstimate top() { return gk15(*this, 0.0, M_PI); }
  ValueAbs refine(const PanelEstimate& top, double abs_tol, int depth, bool& warning) {
    return adaptive(*this, 0.0, M_PI, top, std::max(abs_tol, 1e-300), depth, warning);
  }

 private:
  F& f_;
  double a_, b_;
};

// Integral of f over consecutive intervals [xs[i], xs[i+1]] that pass `keep`.
// Each interval gets the larger of its own relative tolerance and an equal
// share of rel_tol times the total abs integral, so slivers with negligible
// content do not force refinement to roundoff.
template <class F, class Keep>
ValueAbs graded_sum(F& f, const std::vector<double>& xs, Keep&& keep, double rel_tol, int depth, bool& warning,
                    int threads = 1) {
  const std::size_t n = xs.size() < 2 ? 0 : xs.size() - 1;
  std::vector<PanelEstimate> tops(n);
  std::vector<char> used(n, 0);
  parallel_for(n, Execution{threads}, [&](std::size_t i) {
    if (!(xs[i + 1] > xs[i]) || !keep(xs[i], xs[i + 1])) return;
    used[i] = 1;
    tops[i] = Graded<F>(f, xs[i], xs[i + 1]).top();
  });
  CompensatedSum total;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (used[i]) {
      total.add(tops[i].l1);
      ++count;
    }
  if (count == 0) return {};
  const double share = total.value() / static_cast<double>(count);
  std::vector<ValueAbs> vals(n);
  std::vector<char> warn(n, 0);
  parallel_for(n, Execution{threads}, [&](std::size_t i) {
    if (!used[i]) return;
    bool w = false;
    vals[i] = Graded<F>(f, xs[i], xs[i + 1]).refine(tops[i], rel_tol * std::max(tops[i].l1, share), depth, w);
    warn[i] = w;
  });
  CompensatedSum s, l1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) continue;
    s.add(vals[i].value);
    l1.add(vals[i].abs);
    warning = warning || warn[i];
  }
  return {s.value(), l1.value()};
}

void sort_unique(std::vector<double>& v, double lo, double hi) {
  std::erase_if(v, [&](double x) { return !(x >= lo && x <= hi) || !std::isfinite(x); });
  std::sort(v.begin(), v.end());
  const double eps = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  v = std::move(out);
}

std::vector<Vec> circle_circle(const Vec& c1, double r1, const Vec& c2, double r2) {
  const Vec dv = c2 - c1;
  const double d = dv.norm();
  if (d == 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) return {};
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h2 = r1 * r1 - a * a;
  if (h2 < 0.0) return {};
  const double h = std::sqrt(h2);
  const Vec m = c1 + dv * (a / d);
  const Vec perp{-dv[1] / d, dv[0] / d};
  return {m + perp * h, m - perp * h};
}

std::vector<Vec> circle_boundary(const Domain& dom, const Vec& c, double r) {
  const auto& shape = dom.shape();
  if (auto b = std::get_if<BallShape>(&shape)) return circle_circle(c, r, b->center, b->radius);
  if (auto h = std::get_if<HalfSpaceShape>(&shape)) {
    const double s = dot(c, h->normal) - h->offset;
    if (std::abs(s) > r) return {};
    const Vec foot = c - h->normal * s;
    const Vec tangent{-h->normal[1], h->normal[0]};
    const double t = std::sqrt(r * r - s * s);
    return {foot + tangent * t, foot - tangent * t};
  }
  std::vector<Vec> out;
  const int n = 2048;
  const double hstep = 2.0 * M_PI / n;
  auto f = [&](double t) { return distance(dom.boundary_point(t), c) - r; };
  double f0 = f(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t1 = hstep * i;
    const double f1 = f(t1);
    if (f0 * f1 < 0.0) {
      std::uintmax_t it = 100;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto rt = boost::math::tools::toms748_solve(f, t1 - hstep, t1, f0, f1, tol, it);
      out.push_back(dom.boundary_point(0.5 * (rt.first + rt.second)));
    }
    f0 = f1;
  }
  return out;
}

class PlaneIntegrator {
 public:
  PlaneIntegrator(const Region& region, const Box& box, const ScalarMap& g, const IntegrandHints& hints,
                  const IntegrationSettings& st)
      : region_(region), box_(box), g_(g), hints_(hints), st_(st) {
    for (const auto& gr : hints_.grading) {
      std::vector<double> radii;
      if (gr.r_min > 0.0)
        for (double r = gr.r_min; r <= gr.r_max; r *= 2.0) radii.push_back(r);
      rings_.push_back(std::move(radii));
    }
  }

  IntegrationResult run() {
    const std::vector<double> xs = x_breaks();
    IntegrationResult res;
    auto F = [&](double x) {
      bool w = false;
      const ValueAbs v = inner(x, w);
      if (w) inner_warning_ = true;
      return v;
    };
    bool w = false;
    res.value = graded_sum(F, xs, [](double, double) { return true; }, st_.tol, st_.max_depth, w, st_.threads).value;
    res.warning = w || inner_warning_;
    return res;
  }

 private:
  std::vector<double> x_breaks() const {
    const double lo = box_.lo[0], hi = box_.hi[0];
    std::vector<double> xs{lo, hi};
    for (const auto& part : region_.parts) {
      auto b = part.x_breakpoints(box_);
      xs.insert(xs.end(), b.begin(), b.end());
    }
    for (std::size_t i = 0; i < hints_.circles.size(); ++i) {
      const auto& c = hints_.circles[i];
      xs.push_back(c.center[0] - c.radius);
      xs.push_back(c.center[0] + c.radius);
      for (double y : {box_.lo[1], box_.hi[1]}) {
        const double dy = y - c.center[1];
        const double q = c.radius * c.radius - dy * dy;
        if (q <= 0.0) continue;
        xs.push_back(c.center[0] - std::sqrt(q));
        xs.push_back(c.center[0] + std::sqrt(q));
      }
      for (const auto& part : region_.parts)
        for (const Vec& p : circle_boundary(part, c.center, c.radius)) xs.push_back(p[0]);
      for (std::size_t j = i + 1; j < hints_.circles.size(); ++j)
        for (const Vec& p : circle_circle(c.center, c.radius, hints_.circles[j].center, hints_.circles[j].radius))
          xs.push_back(p[0]);
    }
    for (std::size_t k = 0; k < hints_.grading.size(); ++k) {
      const Vec& c = hints_.grading[k].center;
      xs.push_back(c[0]);
      for (double r : rings_[k]) {
        xs.push_back(c[0] - r);
        xs.push_back(c[0] + r);
      }
    }
    sort_unique(xs, lo, hi);
    // Cap panel width so that every panel sees a bounded share of the box.
    const double cap = (hi - lo) / 16.0;
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      out.push_back(xs[i]);
      const int extra = static_cast<int>(std::ceil((xs[i + 1] - xs[i]) / cap)) - 1;
      for (int k = 1; k <= extra; ++k) out.push_back(xs[i] + (xs[i + 1] - xs[i]) * k / (extra + 1));
    }
    out.push_back(xs.back());
    return out;
  }

  ValueAbs inner(double x, bool& warning) const {
    const double lo = box_.lo[1], hi = box_.hi[1];
    std::vector<double> ys{lo, hi};
    for (const auto& part : region_.parts) {
      auto c = part.vertical_crossings(x, lo, hi);
      ys.insert(ys.end(), c.begin(), c.end());
    }
    auto add_circle = [&](const Vec& c, double r) {
      const double dx = x - c[0];
      const double q = r * r - dx * dx;
      if (q <= 0.0) return;
      ys.push_back(c[1] - std::sqrt(q));
      ys.push_back(c[1] + std::sqrt(q));
    };
    for (const auto& c : hints_.circles) add_circle(c.center, c.radius);
    for (std::size_t k = 0; k < hints_.grading.size(); ++k) {
      ys.push_back(hints_.grading[k].center[1]);
      for (double r : rings_[k]) add_circle(hints_.grading[k].center, r);
    }
    sort_unique(ys, lo, hi);
    auto keep = [&](double a, double b) {
      const Vec mid{x, 0.5 * (a + b)};
      if (!region_.contains(mid)) return false;
      return !hints_.maybe_nonzero || hints_.maybe_nonzero(mid);
    };
    auto g = [&](double y) -> ValueAbs {
      const double v = g_(Vec{x, y});
      return {v, std::abs(v)};
    };
    // Tighter than the outer pass so that inner noise stays below the outer tolerance.
    return graded_sum(g, ys, keep, 0.1 * st_.tol, st_.max_depth, warning);
  }

  const Region& region_;
  Box box_;
  const ScalarMap& g_;
  const IntegrandHints& hints_;
  const IntegrationSettings& st_;
  std::vector<std::vector<double>> rings_;
  std::atomic<bool> inner_warning_{false};
};

class CellIntegrator {
 public:
  CellIntegrator(const Region& region, const ScalarMap& g, const IntegrandHints& hints, const IntegrationSettings& st)
      : region_(region), g_(g), hints_(hints), st_(st) {}

  double run(const Box& box, bool& warning) {
    // Start from a 4^d split so that coarse false convergence is unlikely.
    std::vector<Box> cells = split(box, 4);
    std::vector<double> vals(cells.size(), 0.0);
    std::vector<char> warn(cells.size(), 0);
    parallel_for(cells.size(), Execution{st_.threads}, [&](std::size_t i) {
      bool w = false;
      vals[i] = cell(cells[i], 0, w);
      warn[i] = w;
    });
    CompensatedSum s;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      s.add(vals[i]);
      warning = warning || warn[i];
    }
    return s.value();
  }

 private:
  static std::vector<Box> split(const Box& b, int n) {
    const int d = b.dim();
    int total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    std::vector<Box> out;
    for (int idx = 0; idx < total; ++idx) {
      Box c = b;
      int rem = idx;
      for (int i = 0; i < d; ++i) {
        const int k = rem % n;
        rem /= n;
        const double w = b.side(i) / n;
        c.lo[i] = b.lo[i] + w * k;
        c.hi[i] = k + 1 == n ? b.hi[i] : b.lo[i] + w * (k + 1);
      }
      out.push_back(c);
    }
    return out;
  }

  // 0: outside, 1: inside, 2: straddles the boundary.
  int classify(const Box& c) const {
    const Vec m = c.center();
    const double hd = 0.5 * c.diagonal();
    int state = 1;
    for (const auto& part : region_.parts) {
      const double s = part.signed_distance(m);
      if (s > hd) return 0;
      if (s >= -hd) state = 2;
    }
    return state;
  }

  double gauss(const Box& c, double* l1) const {
    const GaussRule& rule = gauss_legendre(st_.cell_gauss);
    const int d = c.dim();
    const int q = rule.size();
    int total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    CompensatedSum s, a;
    for (int idx = 0; idx < total; ++idx) {
      Vec y(d);
      double w = 1.0;
      int rem = idx;
      for (int i = 0; i < d; ++i) {
        const int k = rem % q;
        rem /= q;
        const double half = 0.5 * c.side(i);
        y[i] = c.lo[i] + half * (1.0 + rule.nodes[k]);
        w *= half * rule.weights[k];
      }
      const double v = g_(y);
      s.add(w * v);
      a.add(w * std::abs(v));
    }
    if (l1) *l1 = a.value();
    return s.value();
  }

  double fractional(const Box& c) const {
    const int d = c.dim();
    const int n = 4;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    CompensatedSum s;
    for (int idx = 0; idx < total; ++idx) {
      Vec y(d);
      int rem = idx;
      for (int i = 0; i < d; ++i) {
        const int k = rem % n;
        rem /= n;
        y[i] = c.lo[i] + c.side(i) * (k + 0.5) / n;
      }
      if (region_.contains(y)) s.add(g_(y));
    }
    return s.value() * c.volume() / total;
  }

  double cell(const Box& c, int depth, bool& warning) const {
    if (hints_.support_box && box_is_empty(box_intersection(c, *hints_.support_box))) return 0.0;
    const int state = classify(c);
    if (state == 0) return 0.0;
    if (state == 2) {
      if (depth >= st_.cell_depth) return fractional(c);
      CompensatedSum s;
      for (const Box& ch : split(c, 2)) s.add(cell(ch, depth + 1, warning));
      return s.value();
    }
    double l1 = 0.0;
    const double whole = gauss(c, &l1);
    return refine(c, whole, l1, depth, warning);
  }

  double refine(const Box& c, double whole, double l1, int depth, bool& warning) const {
    std::vector<Box> kids = split(c, 2);
    std::vector<double> kv(kids.size()), kl(kids.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      kv[i] = gauss(kids[i], &kl[i]);
      s.add(kv[i]);
    }
    const double fine = s.value();
    if (std::abs(fine - whole) <= st_.tol * std::max(l1, 1e-300)) return fine;
    if (depth >= st_.cell_depth) {
      warning = true;
      return fine;
    }
    CompensatedSum t;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (classify(kids[i]) != 1) t.add(cell(kids[i], depth + 1, warning));
      else t.add(refine(kids[i], kv[i], kl[i], depth + 1, warning));
    }
    return t.value();
  }

  const Region& region_;
  const ScalarMap& g_;
  const IntegrandHints& hints_;
  const IntegrationSettings& st_;
};

double kernel_lipschitz(const HomogeneousKernel& k) {
  if (k.lipschitz_hint()) return *k.lipschitz_hint();
  // Sampled difference quotient on the sphere, with a safety factor.
  double lip = 0.0;
  if (k.dim() == 2) {
    const int n = 2048;
    for (int i = 0; i < n; ++i) {
      const Vec a = polar_unit(2.0 * M_PI * i / n), b = polar_unit(2.0 * M_PI * (i + 1) / n);
      lip = std::max(lip, (k.on_sphere(a) - k.on_sphere(b)).norm() / distance(a, b));
    }
  } else {
    const int n = 64;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        const double t = M_PI * (i + 0.5) / n, p = M_PI * j / n;
        const Vec a{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
        const double t2 = t + M_PI / n / 2, p2 = p + M_PI / n / 2;
        const Vec b{std::sin(t2) * std::cos(p2), std::sin(t2) * std::sin(p2), std::cos(t2)};
        lip = std::max(lip, (k.on_sphere(a) - k.on_sphere(b)).norm() / distance(a, b));
      }
  }
  return 2.0 * lip;
}

double sphere_area(int d) { return d == 2 ? 2.0 * M_PI : 4.0 * M_PI; }

}  // namespace

IntegrationResult integrate_region(const Region& region, const Box& box, const ScalarMap& g,
                                   const IntegrandHints& hints, const IntegrationSettings& settings) {
  if (region.parts.empty()) throw ValidationError("integrate_region: empty region");
  const int d = region.dim();
  if (box.dim() != d) throw ValidationError("integrate_region: box dimension mismatch");
  IntegrationResult res;
  Box b = box;
  if (hints.support_box) b = box_intersection(b, *hints.support_box);
  if (box_is_empty(b)) return res;
  auto method = settings.method;
  if (method == IntegrationSettings::Method::automatic)
    method = d == 2 ? IntegrationSettings::Method::plane : IntegrationSettings::Method::cells;
  if (method == IntegrationSettings::Method::plane) {
    if (d != 2) throw ValidationError("plane integration is two-dimensional");
    PlaneIntegrator pi(region, b, g, hints, settings);
    return pi.run();
  }
  CellIntegrator ci(region, g, hints, settings);
  res.value = ci.run(b, res.warning);
  return res;
}

IntegrationResult integrate_field(const Region& region, const FieldIntegrand& field,
                                  const IntegrationSettings& settings) {
  const int d = region.dim();
  const auto& K = field.kernel;
  const auto& f = field.source;
  if (K.dim() != d) throw ValidationError("integrate_field: kernel and domain dimensions differ");
  if (!f.empty() && f.dim() != d) throw ValidationError("integrate_field: source and domain dimensions differ");
  if (field.windows.empty()) throw ValidationError("integrate_field: no windows");
  IntegrationResult res;
  if (f.empty()) return res;

  std::vector<RadialWindow> windows = field.windows;
  bool has_masses = false;
  for (const auto& p : f.points()) has_masses = has_masses || p.mass != 0.0;
  const double pv_radius = std::ldexp(1.0, -settings.pv_level - 1);
  for (auto& w : windows) {
    if (has_masses && w.reaches_origin()) {
      w.inner = pv_radius;
      res.principal_value = true;
    }
  }

  // Support of the integrand.
  std::vector<int> sw = field.support_windows;
  std::optional<Box> support;
  if (!sw.empty()) {
    double reach = 0.0;
    bool bounded = true;
    for (int i : sw) {
      bounded = bounded && windows[i].bounded();
      reach = std::max(reach, windows[i].outer);
    }
    if (bounded) support = f.bounding_box().expanded(reach);
  }

  const Box fbox = f.bounding_box();
  const double frad = 0.5 * fbox.diagonal();
  Box box;
  bool have_box = false;
  for (const auto& part : region.parts) {
    if (!part.bounded()) continue;
    box = have_box ? box_intersection(box, part.bounding_box()) : part.bounding_box();
    have_box = true;
  }
  if (support) {
    box = have_box ? box_intersection(box, *support) : *support;
    have_box = true;
  }
  if (!have_box) {
    if (!f.mean_zero())
      throw ValidationError("unbounded domain with an unbounded kernel window needs a mean-zero source (divergent tail)");
    double R = settings.truncation_radius;
    if (!(R > 0.0)) {
      const double p = field.tail_power;
      const double l1 = f.l1_norm();
      double C = settings.tail_constant;
      if (!(C > 0.0)) {
        const double grad = std::abs(K.degree()) * K.sphere_sup() + kernel_lipschitz(K);
        C = sphere_area(d) * field.tail_phi_sup * std::pow(grad * l1 * std::max(frad, 1e-3), p) / p;
      }
      const double tol_abs = settings.tol * std::pow(l1, p);
      R = std::pow(2.0 * C / tol_abs, 1.0 / p);
      R = std::max(R, 4.0 * std::max(frad, 1.0));
    }
    res.truncation_radius = R;
    box = Box{fbox.center(), fbox.center()}.expanded(R + frad);
    have_box = true;
  }
  if (box_is_empty(box)) return res;

  IntegrandHints hints;
  hints.support_box = support;
  std::vector<double> radii;
  for (const auto& w : windows) {
    if (w.inner > 0.0) radii.push_back(w.inner);
    if (w.bounded()) radii.push_back(w.outer);
  }
  const double diag = box.diagonal();
  double rmin_mass = diag;
  for (double r : radii) rmin_mass = std::min(rmin_mass, r);
  for (const auto& p : f.points()) {
    if (p.mass == 0.0) continue;
    for (double r : radii) hints.circles.push_back({p.location, r});
    hints.grading.push_back({p.location, rmin_mass, diag});
  }
  for (const auto& bm : f.bumps()) {
    const double R = bm.radius();
    hints.circles.push_back({bm.center, R});
    for (double r : radii) {
      hints.circles.push_back({bm.center, r + R});
      if (std::abs(r - R) > 0.0) hints.circles.push_back({bm.center, std::abs(r - R)});
    }
    hints.grading.push_back({bm.center, 0.5 * R, diag});
  }
  if (!sw.empty()) {
    hints.maybe_nonzero = [&f, windows, sw](const Vec& x) {
      for (int i : sw) {
        const auto& w = windows[i];
        for (const auto& p : f.points()) {
          const double r = distance(x, p.location);
          if (p.mass != 0.0 && r >= w.inner && r <= w.outer) return true;
        }
        for (const auto& bm : f.bumps()) {
          const double r = distance(x, bm.center);
          if (r >= w.inner - bm.radius() && r <= w.outer + bm.radius()) return true;
        }
        for (const auto& gf : f.grids()) {
          const Box gb = gf.box();
          if (gb.max_distance_to(x) >= w.inner && gb.distance_to(x) <= w.outer) return true;
        }
      }
      return false;
    };
  }

  std::atomic<bool> conv_warning{false};
  ScalarMap g = [&](const Vec& x) {
    std::vector<Vec> vals;
    vals.reserve(windows.size());
    for (const auto& w : windows) {
      ConvolutionValue cv = convolve_at(K, w, f, x, settings.conv);
      if (cv.warning) conv_warning = true;
      vals.push_back(cv.value);
    }
    return field.combine(vals);
  };
  IntegrationResult r = integrate_region(region, box, g, hints, settings);
  res.value = r.value;
  res.warning = r.warning || conv_warning;
  return res;
}

IntegrationResult integrate_over_domain(const Region& region, const FieldSpec& spec,
                                        const IntegrationSettings& settings) {
  if (spec.kernel.target_dim() != spec.phi.target_dim())
    throw ValidationError("kernel target dimension does not match the integrand");
  FieldIntegrand field{spec.kernel, spec.source, {spec.window}, {}, {}, spec.phi.p(), spec.phi.sphere_sup()};
  const double s = spec.sign < 0 ? -1.0 : 1.0;
  const PhiIntegrand phi = spec.phi;
  field.combine = [phi, s](const std::vector<Vec>& v) { return phi(v[0] * s); };
  field.support_windows = {0};
  return integrate_field(region, field, settings);
}

IntegrationResult integrate_over_domain(const Domain& domain, const FieldSpec& spec,
                                        const IntegrationSettings& settings) {
  return integrate_over_domain(Region::of(domain), spec, settings);
}

}  // namespace philab
