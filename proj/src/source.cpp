#include "philab/source.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "philab/error.hpp"
#include "philab/quadrature.hpp"

namespace philab {

namespace {

// Gauss-Legendre tensor rule over a box, applied to |g| or g.
template <class F>
double box_gauss(const Box& box, int q, F&& g) {
  const GaussRule& rule = gauss_legendre(q);
  const int d = box.dim();
  int total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  CompensatedSum s;
  for (int idx = 0; idx < total; ++idx) {
    Vec y(d);
    double w = 1.0;
    int rem = idx;
    for (int i = 0; i < d; ++i) {
      const int k = rem % q;
      rem /= q;
      const double half = 0.5 * box.side(i);
      y[i] = box.lo[i] + half * (1.0 + rule.nodes[k]);
      w *= half * rule.weights[k];
    }
    s.add(w * g(y));
  }
  return s.value();
}

// Splits box into cells of side at most h (per axis, uniform count).
std::vector<Box> split_box(const Box& box, double h) {
  const int d = box.dim();
  std::array<int, 3> n{1, 1, 1};
  int total = 1;
  for (int i = 0; i < d; ++i) {
    n[i] = std::max(1, static_cast<int>(std::ceil(box.side(i) / h - 1e-12)));
    total *= n[i];
  }
  std::vector<Box> out;
  out.reserve(static_cast<std::size_t>(total));
  for (int idx = 0; idx < total; ++idx) {
    Box c = box;
    int rem = idx;
    for (int i = 0; i < d; ++i) {
      const int k = rem % n[i];
      rem /= n[i];
      const double w = box.side(i) / n[i];
      c.lo[i] = box.lo[i] + w * k;
      c.hi[i] = k + 1 == n[i] ? box.hi[i] : box.lo[i] + w * (k + 1);
    }
    out.push_back(c);
  }
  return out;
}

bool in_half_open(const Box& b, const Vec& x) {
  for (int i = 0; i < b.dim(); ++i)
    if (x[i] < b.lo[i] || x[i] >= b.hi[i]) return false;
  return true;
}

}  // namespace

double bump_profile_integral(int dim) {
  if (dim == 2) return M_PI / 3.0;
  if (dim == 3) return 32.0 * M_PI / 105.0;
  throw ValidationError("bump profile: dimension must be 2 or 3");
}

double Bump::density(const Vec& y) const {
  const double t2 = (y - center).squared_norm() * scale * scale;
  if (t2 >= 1.0) return 0.0;
  const double b = (1.0 - t2) * (1.0 - t2);
  return mass * std::pow(scale, center.size()) * b / bump_profile_integral(center.size());
}

std::size_t GridField::cell_count() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(extents[i]);
  return n;
}

Box GridField::cell_box(std::size_t flat) const {
  Box b{origin, origin};
  for (int i = dim() - 1; i >= 0; --i) {
    const auto k = static_cast<int>(flat % static_cast<std::size_t>(extents[i]));
    flat /= static_cast<std::size_t>(extents[i]);
    b.lo[i] = origin[i] + spacing * k;
    b.hi[i] = b.lo[i] + spacing;
  }
  return b;
}

Box GridField::box() const {
  Box b{origin, origin};
  for (int i = 0; i < dim(); ++i) b.hi[i] += spacing * extents[i];
  return b;
}

double GridField::density(const Vec& y) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    const double t = std::floor((y[i] - origin[i]) / spacing);
    if (t < 0 || t >= extents[i]) return 0.0;
    flat = flat * static_cast<std::size_t>(extents[i]) + static_cast<std::size_t>(t);
  }
  return values[flat];
}

SourceFunction SourceFunction::point_masses(std::vector<PointMass> masses) {
  if (masses.empty()) throw ValidationError("point_masses: empty list (use SourceFunction(dim) for zero)");
  SourceFunction f(masses.front().location.size());
  for (const auto& m : masses) {
    if (m.location.size() != f.dim_) throw ValidationError("point_masses: mixed dimensions");
    if (!std::isfinite(m.mass)) throw ValidationError("point_masses: non-finite mass");
  }
  f.points_ = std::move(masses);
  return f;
}

SourceFunction SourceFunction::bump(const Vec& center, double scale, double mass) {
  if (!(scale > 0.0)) throw ValidationError("bump: scale must be positive");
  SourceFunction f(center.size());
  bump_profile_integral(f.dim_);
  f.bumps_.push_back(Bump{center, scale, mass});
  return f;
}

SourceFunction SourceFunction::grid(GridField field) {
  if (!(field.spacing > 0.0)) throw ValidationError("grid field: spacing must be positive");
  for (int i = 0; i < field.dim(); ++i)
    if (field.extents[i] <= 0) throw ValidationError("grid field: extents must be positive");
  if (field.values.size() != field.cell_count()) throw ValidationError("grid field: value count does not match extents");
  SourceFunction f(field.dim());
  f.grids_.push_back(std::move(field));
  return f;
}

double SourceFunction::mass() const {
  CompensatedSum s;
  for (const auto& p : points_) s.add(p.mass);
  for (const auto& b : bumps_) s.add(b.mass);
  for (const auto& g : grids_) {
    const double vol = std::pow(g.spacing, g.dim());
    for (double v : g.values) s.add(v * vol);
  }
  return s.value();
}

double SourceFunction::l1_norm() const {
  CompensatedSum s;
  std::map<std::vector<double>, double> merged;
  for (const auto& p : points_) merged[p.location.to_vector()] += p.mass;
  for (const auto& [loc, m] : merged) s.add(std::abs(m));

  const std::size_t continuous = bumps_.size() + grids_.size();
  bool disjoint = grids_.size() <= 1 && (grids_.empty() || bumps_.empty());
  for (std::size_t i = 0; disjoint && i < bumps_.size(); ++i)
    for (std::size_t j = i + 1; j < bumps_.size(); ++j)
      if (distance(bumps_[i].center, bumps_[j].center) < bumps_[i].radius() + bumps_[j].radius()) disjoint = false;
  if (continuous == 0) return s.value();
  if (disjoint) {
    for (const auto& b : bumps_) s.add(std::abs(b.mass));
    for (const auto& g : grids_) {
      const double vol = std::pow(g.spacing, g.dim());
      for (double v : g.values) s.add(std::abs(v) * vol);
    }
    return s.value();
  }
  SourceFunction cont(dim_);
  cont.bumps_ = bumps_;
  cont.grids_ = grids_;
  s.add(cont.abs_mass_in(cont.bounding_box()));
  return s.value();
}

bool SourceFunction::mean_zero() const { return std::abs(mass()) <= 1e-12; }

Box SourceFunction::bounding_box() const {
  if (empty()) return Box{Vec(dim_), Vec(dim_)};
  bool first = true;
  Box box;
  auto grow = [&](const Box& b) {
    box = first ? b : box_union(box, b);
    first = false;
  };
  for (const auto& p : points_) grow(Box{p.location, p.location});
  for (const auto& b : bumps_) grow(Box{b.center, b.center}.expanded(b.radius()));
  for (const auto& g : grids_) grow(g.box());
  return box;
}

double SourceFunction::density(const Vec& y) const {
  double s = 0.0;
  for (const auto& b : bumps_) s += b.density(y);
  for (const auto& g : grids_) s += g.density(y);
  return s;
}

double SourceFunction::abs_mass_in(const Box& box) const {
  CompensatedSum s;
  std::map<std::vector<double>, double> merged;
  for (const auto& p : points_)
    if (in_half_open(box, p.location)) merged[p.location.to_vector()] += p.mass;
  for (const auto& [loc, m] : merged) s.add(std::abs(m));

  if (bumps_.empty() && grids_.size() == 1) {
    const GridField& g = grids_.front();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const Box ov = box_intersection(g.cell_box(c), box);
      if (box_is_empty(ov)) continue;
      s.add(std::abs(g.values[c]) * ov.volume());
    }
    return s.value();
  }
  if (bumps_.empty() && grids_.empty()) return s.value();

  SourceFunction cont(dim_);
  cont.bumps_ = bumps_;
  cont.grids_ = grids_;
  const Box ov = box_intersection(box, cont.bounding_box());
  if (box_is_empty(ov)) return s.value();
  double h = std::numeric_limits<double>::infinity();
  for (const auto& b : bumps_) h = std::min(h, b.radius() / 8.0);
  for (const auto& g : grids_) h = std::min(h, g.spacing);
  for (const Box& cell : split_box(ov, h))
    s.add(box_gauss(cell, 4, [&](const Vec& y) { return std::abs(cont.density(y)); }));
  return s.value();
}

std::vector<PointMass> SourceFunction::abs_atoms_in(const Box& box, double h) const {
  std::vector<PointMass> out;
  for (const auto& p : points_)
    if (in_half_open(box, p.location) && p.mass != 0.0) out.push_back(PointMass{p.location, std::abs(p.mass)});
  if (bumps_.empty() && grids_.empty()) return out;
  SourceFunction cont(dim_);
  cont.bumps_ = bumps_;
  cont.grids_ = grids_;
  const Box ov = box_intersection(box, cont.bounding_box());
  if (box_is_empty(ov)) return out;
  for (const Box& cell : split_box(ov, h)) {
    auto absd = [&](const Vec& y) { return std::abs(cont.density(y)); };
    const double m = box_gauss(cell, 3, absd);
    if (m <= 0.0) continue;
    Vec centroid(dim_);
    for (int i = 0; i < dim_; ++i) centroid[i] = box_gauss(cell, 3, [&](const Vec& y) { return y[i] * absd(y); }) / m;
    out.push_back(PointMass{centroid, m});
  }
  return out;
}

SourceFunction& SourceFunction::add(const SourceFunction& other) {
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_ && !other.empty()) throw ValidationError("source functions of different dimension");
  points_.insert(points_.end(), other.points_.begin(), other.points_.end());
  bumps_.insert(bumps_.end(), other.bumps_.begin(), other.bumps_.end());
  grids_.insert(grids_.end(), other.grids_.begin(), other.grids_.end());
  return *this;
}

SourceFunction SourceFunction::scaled(double lambda) const {
  SourceFunction f = *this;
  for (auto& p : f.points_) p.mass *= lambda;
  for (auto& b : f.bumps_) b.mass *= lambda;
  for (auto& g : f.grids_)
    for (double& v : g.values) v *= lambda;
  return f;
}

SourceFunction SourceFunction::translated(const Vec& shift) const {
  SourceFunction f = *this;
  for (auto& p : f.points_) p.location += shift;
  for (auto& b : f.bumps_) b.center += shift;
  for (auto& g : f.grids_) g.origin += shift;
  return f;
}

SourceFunction SourceFunction::dilated(double n) const {
  if (!(n > 0.0)) throw ValidationError("dilation factor must be positive");
  SourceFunction f = *this;
  for (auto& p : f.points_) p.location /= n;
  for (auto& b : f.bumps_) {
    b.center /= n;
    b.scale *= n;
  }
  for (auto& g : f.grids_) {
    g.origin /= n;
    g.spacing /= n;
    for (double& v : g.values) v *= std::pow(n, dim_);
  }
  return f;
}

std::string SourceFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "dim=" << dim_;
  for (const auto& p : points_) {
    os << " point(";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << p.location[i];
    os << ";" << p.mass << ")";
  }
  for (const auto& b : bumps_) {
    os << " bump(";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << b.center[i];
    os << ";scale=" << b.scale << ";mass=" << b.mass << ")";
  }
  for (const auto& g : grids_) os << " grid(cells=" << g.cell_count() << ";h=" << g.spacing << ")";
  return os.str();
}

}  // namespace philab
