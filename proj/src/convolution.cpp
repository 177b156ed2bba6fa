#include "philab/convolution.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "philab/error.hpp"
#include "philab/parallel.hpp"
#include "philab/quadrature.hpp"

namespace philab {

namespace {

struct VecSum {
  explicit VecSum(int n) : parts(static_cast<std::size_t>(n)) {}
  void add(const Vec& v, double w = 1.0) {
    for (std::size_t i = 0; i < parts.size(); ++i) parts[i].add(w * v[static_cast<int>(i)]);
  }
  Vec value() const {
    Vec v(static_cast<int>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<int>(i)] = parts[i].value();
    return v;
  }
  std::vector<CompensatedSum> parts;
};

// Orthonormal completion (u, v) of a unit vector e in R^3.
std::pair<Vec, Vec> complete_frame(const Vec& e) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(e[i]) < std::abs(e[k])) k = i;
  const Vec a = Vec::unit(3, k);
  const Vec u = normalized(a - e * dot(a, e));
  const Vec v{e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]};
  return {u, v};
}

// Integral over a chord of r^{alpha-1} * (1 - |w - r zeta|^2 / R^2)^2 where
// <w, zeta> = D cos(theta), restricted to the window.
double chord_integral(double alpha, double D, double R, double cos_t, double sin_t, const RadialWindow& win) {
  const double m = D * cos_t;
  const double h2 = R * R - D * D * sin_t * sin_t;
  if (h2 <= 0.0) return 0.0;
  const double hh = std::sqrt(h2);
  const double lo = std::max({m - hh, 0.0, win.inner});
  const double hi = std::min(m + hh, win.outer);
  if (!(hi > lo)) return 0.0;
  const double R4 = R * R * R * R;
  if (alpha == 1.0) {
    auto F = [h2](double s) { return h2 * h2 * s - 2.0 * h2 * s * s * s / 3.0 + s * s * s * s * s / 5.0; };
    return (F(hi - m) - F(lo - m)) / R4;
  }
  if (D <= 2.0 * R) {
    const double u = 1.0 - D * D / (R * R);
    const double v = 2.0 * m / (R * R);
    const double t = -1.0 / (R * R);
    const double c[5] = {u * u, 2.0 * u * v, v * v + 2.0 * u * t, 2.0 * v * t, t * t};
    double s = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double e = alpha + k;
      s += c[k] * (std::pow(hi, e) - std::pow(lo, e)) / e;
    }
    return s;
  }
  return gauss_integrate(
             [&](double sig) {
               const double q = h2 - sig * sig;
               return q * q * std::pow(m + sig, alpha - 1.0);
             },
             lo - m, hi - m, 16) /
         R4;
}

Vec bump_convolution(const HomogeneousKernel& K, const RadialWindow& win, const Bump& b, const Vec& x,
                     const ConvolutionSettings& st) {
  const int d = K.dim();
  const int l = K.target_dim();
  const double R = b.radius();
  const double amp = b.mass * std::pow(b.scale, d) / bump_profile_integral(d);
  const Vec w = x - b.center;
  const double D = w.norm();
  const Vec e = D > 0.0 ? w / D : Vec::unit(d, 0);

  // Quick support rejection: |x - y| ranges over [D - R, D + R].
  if (D + R <= win.inner || std::max(0.0, D - R) >= win.outer) return Vec(l);

  std::pair<Vec, Vec> frame;
  if (d == 3) frame = complete_frame(e);
  auto ring = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (d == 2) {
      const Vec p{c * e[0] - s * e[1], s * e[0] + c * e[1]};
      const Vec q{c * e[0] + s * e[1], -s * e[0] + c * e[1]};
      return K.on_sphere(p) + K.on_sphere(q);
    }
    VecSum acc(l);
    const double h = 2.0 * M_PI / st.azimuth_nodes;
    for (int j = 0; j < st.azimuth_nodes; ++j) {
      const double psi = h * j;
      const Vec z = e * c + frame.first * (s * std::cos(psi)) + frame.second * (s * std::sin(psi));
      acc.add(K.on_sphere(z), h * s);
    }
    return acc.value();
  };

  const bool cone = D > R;
  const double theta_max = cone ? std::asin(R / D) : M_PI;
  // Breakpoints where a window sphere meets the support sphere.
  std::vector<double> cuts{0.0};
  for (double rho : {win.inner, win.outer}) {
    if (!(rho > 0.0) || !std::isfinite(rho) || D == 0.0) continue;
    const double c = (D * D + rho * rho - R * R) / (2.0 * D * rho);
    if (std::abs(c) >= 1.0) continue;
    const double th = std::acos(c);
    if (th <= 0.0 || th >= theta_max) continue;
    cuts.push_back(cone ? std::asin(th / theta_max) : th);
  }
  const double top = cone ? 0.5 * M_PI : M_PI;
  cuts.push_back(top);
  std::sort(cuts.begin(), cuts.end());

  auto integrand = [&](double s) {
    const double theta = cone ? theta_max * std::sin(s) : s;
    const double jac = cone ? theta_max * std::cos(s) : 1.0;
    const double rad = chord_integral(K.alpha(), D, R, std::cos(theta), std::sin(theta), win);
    if (rad == 0.0) return Vec(l);
    return ring(theta) * (rad * jac);
  };

  const GaussRule& g = gauss_legendre(st.angular_nodes);
  VecSum total(l);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], c = cuts[k + 1];
    if (!(c > a)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(st.angular_panels * (c - a) / top)));
    const double pw = (c - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * pw, half = 0.5 * pw, mid = lo + half;
      for (int i = 0; i < g.size(); ++i) total.add(integrand(mid + half * g.nodes[i]), half * g.weights[i]);
    }
  }
  return total.value() * amp;
}

// Exact polar integral of K over a cell containing x (d = 2), or a product-rule
// estimate (d = 3).
Vec cell_polar(const HomogeneousKernel& K, const RadialWindow& win, const Box& cell, const Vec& x) {
  const int d = K.dim();
  const double alpha = K.alpha();
  auto exit_radius = [&](const Vec& zeta) {
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      if (zeta[i] > 0.0) r = std::min(r, (x[i] - cell.lo[i]) / zeta[i]);
      else if (zeta[i] < 0.0) r = std::min(r, (x[i] - cell.hi[i]) / zeta[i]);
    }
    return r;
  };
  auto radial = [&](const Vec& zeta) {
    const double hi = std::min(exit_radius(zeta), win.outer);
    const double lo = win.inner;
    if (!(hi > lo)) return 0.0;
    return (std::pow(hi, alpha) - std::pow(lo, alpha)) / alpha;
  };
  VecSum acc(K.target_dim());
  if (d == 2) {
    std::vector<double> angles;
    for (int m = 0; m < 4; ++m) {
      const Vec c = cell.corner(static_cast<unsigned>(m));
      const Vec dv = x - c;
      angles.push_back(std::atan2(dv[1], dv[0]));
    }
    std::sort(angles.begin(), angles.end());
    angles.push_back(angles.front() + 2.0 * M_PI);
    const GaussRule& g = gauss_legendre(16);
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
      const double half = 0.5 * (angles[k + 1] - angles[k]), mid = angles[k] + half;
      if (half <= 0.0) continue;
      for (int i = 0; i < g.size(); ++i) {
        const Vec zeta = polar_unit(mid + half * g.nodes[i]);
        acc.add(K.on_sphere(zeta), half * g.weights[i] * radial(zeta));
      }
    }
    return acc.value();
  }
  const GaussRule& g = gauss_legendre(8);
  const int naz = 32;
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.nodes[i];
    const double s = std::sqrt(1.0 - t * t);
    for (int j = 0; j < naz; ++j) {
      const double psi = 2.0 * M_PI * j / naz;
      const Vec zeta{s * std::cos(psi), s * std::sin(psi), t};
      acc.add(K.on_sphere(zeta), g.weights[i] * (2.0 * M_PI / naz) * radial(zeta));
    }
  }
  return acc.value();
}

Vec cell_integral(const HomogeneousKernel& K, const RadialWindow& win, const Box& cell, const Vec& x, int depth,
                  const ConvolutionSettings& st, bool& warning) {
  const int l = K.target_dim();
  const double dmin = cell.distance_to(x);
  const double dmax = cell.max_distance_to(x);
  if (dmax < win.inner || dmin >= win.outer) return Vec(l);
  const double diag = cell.diagonal();
  const bool cut = (win.inner > dmin && win.inner < dmax) || (win.outer > dmin && win.outer < dmax);
  const bool inside = dmin == 0.0;
  if (!cut && dmin > 4.0 * diag) {
    const GaussRule& g = gauss_legendre(4);
    const int d = cell.dim();
    const int total = 1 << (2 * d);
    VecSum acc(l);
    for (int idx = 0; idx < total; ++idx) {
      Vec y(d);
      double wgt = 1.0;
      int rem = idx;
      for (int i = 0; i < d; ++i) {
        const int k = rem % 4;
        rem /= 4;
        const double half = 0.5 * cell.side(i);
        y[i] = cell.lo[i] + half * (1.0 + g.nodes[k]);
        wgt *= half * g.weights[k];
      }
      acc.add(K(x - y), wgt);
    }
    return acc.value();
  }
  const int cap = (inside || dmin <= diag) ? st.max_depth : st.window_depth;
  if (depth >= cap) {
    if (inside) return cell_polar(K, win, cell, x);
    const Vec y = cell.center();
    const double r = distance(x, y);
    if (r == 0.0 || !win.contains(r)) {
      if (cut) warning = true;
      return Vec(l);
    }
    const Vec v = K(x - y) * cell.volume();
    if (cut && v.norm() > st.tol) warning = true;
    return v;
  }
  VecSum acc(l);
  const Vec c = cell.center();
  for (int m = 0; m < cell.corner_count(); ++m) {
    const Vec corner = cell.corner(static_cast<unsigned>(m));
    Box child{c, c};
    for (int i = 0; i < cell.dim(); ++i) {
      child.lo[i] = std::min(c[i], corner[i]);
      child.hi[i] = std::max(c[i], corner[i]);
    }
    acc.add(cell_integral(K, win, child, x, depth + 1, st, warning));
  }
  return acc.value();
}

}  // namespace

ConvolutionValue convolve_at(const HomogeneousKernel& kernel, const RadialWindow& window, const SourceFunction& f,
                             const Vec& x, const ConvolutionSettings& settings) {
  if (x.size() != kernel.dim()) throw ValidationError("convolve_at: point dimension mismatch");
  if (!f.empty() && f.dim() != kernel.dim()) throw ValidationError("convolve_at: source dimension mismatch");
  ConvolutionValue out{Vec(kernel.target_dim()), false};
  VecSum acc(kernel.target_dim());
  for (const auto& p : f.points()) {
    const double r = distance(x, p.location);
    if (!window.contains(r) || p.mass == 0.0) continue;
    if (r == 0.0) throw SingularityError("convolve_at: evaluation point coincides with a point mass");
    acc.add(kernel(x - p.location), p.mass);
  }
  for (const auto& b : f.bumps()) acc.add(bump_convolution(kernel, window, b, x, settings));
  for (const auto& g : f.grids()) {
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      if (g.values[c] == 0.0) continue;
      acc.add(cell_integral(kernel, window, g.cell_box(c), x, 0, settings, out.warning), g.values[c]);
    }
  }
  out.value = acc.value();
  return out;
}

ConvolutionValue convolve_at(const HomogeneousKernel& kernel, const SourceFunction& f, const Vec& x,
                             const ConvolutionSettings& settings) {
  return convolve_at(kernel, RadialWindow::full(), f, x, settings);
}

ConvolutionValue convolve_at(const KernelPiece& piece, const SourceFunction& f, const Vec& x,
                             const ConvolutionSettings& settings) {
  return convolve_at(piece.kernel, piece.window(), f, x, settings);
}

std::size_t GridSpec::cell_count() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(extents[i]);
  return n;
}

Vec GridSpec::cell_center(std::size_t flat) const {
  Vec c(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const auto k = flat % static_cast<std::size_t>(extents[i]);
    flat /= static_cast<std::size_t>(extents[i]);
    c[i] = origin[i] + spacing * (static_cast<double>(k) + 0.5);
  }
  return c;
}

Vec FieldOnGrid::at(std::size_t flat) const {
  Vec v(target_dim);
  for (int j = 0; j < target_dim; ++j) v[j] = values[flat * target_dim + j];
  return v;
}

void FieldOnGrid::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string());
  for (int i = 0; i < grid.dim(); ++i) os << (i ? "," : "") << "x" << i;
  for (int j = 0; j < target_dim; ++j) os << ",v" << j;
  os << "\n";
  char buf[32];
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const Vec x = grid.cell_center(c);
    for (int i = 0; i < grid.dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x[i]);
      os << (i ? "," : "") << buf;
    }
    for (int j = 0; j < target_dim; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", values[c * target_dim + j]);
      os << "," << buf;
    }
    os << "\n";
  }
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ValidationError("field binary: truncated file");
  return v;
}

}  // namespace

void FieldOnGrid::write_binary(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string());
  put_le<std::int32_t>(os, grid.dim());
  put_le<std::int32_t>(os, target_dim);
  for (int i = 0; i < grid.dim(); ++i) put_le<double>(os, grid.origin[i]);
  put_le<double>(os, grid.spacing);
  for (int i = 0; i < grid.dim(); ++i) put_le<std::int32_t>(os, grid.extents[i]);
  for (double v : values) put_le<double>(os, v);
}

FieldOnGrid FieldOnGrid::read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path.string());
  FieldOnGrid f;
  const int d = get_le<std::int32_t>(is);
  f.target_dim = get_le<std::int32_t>(is);
  if (d < 1 || d > 3 || f.target_dim < 1 || f.target_dim > Vec::kMaxDim)
    throw ValidationError("field binary: bad header");
  f.grid.origin = Vec(d);
  for (int i = 0; i < d; ++i) f.grid.origin[i] = get_le<double>(is);
  f.grid.spacing = get_le<double>(is);
  for (int i = 0; i < d; ++i) f.grid.extents[i] = get_le<std::int32_t>(is);
  f.values.resize(f.grid.cell_count() * static_cast<std::size_t>(f.target_dim));
  for (double& v : f.values) v = get_le<double>(is);
  return f;
}

FieldOnGrid convolve_field(const HomogeneousKernel& kernel, const RadialWindow& window, const SourceFunction& f,
                           const GridSpec& grid, const ConvolutionSettings& settings, int threads) {
  if (grid.dim() != kernel.dim()) throw ValidationError("convolve_field: grid dimension mismatch");
  if (!(grid.spacing > 0.0)) throw ValidationError("convolve_field: spacing must be positive");
  for (int i = 0; i < grid.dim(); ++i)
    if (grid.extents[i] <= 0) throw ValidationError("convolve_field: extents must be positive");
  FieldOnGrid out;
  out.grid = grid;
  out.target_dim = kernel.target_dim();
  const std::size_t n = grid.cell_count();
  out.values.assign(n * static_cast<std::size_t>(out.target_dim), 0.0);
  std::vector<char> warn(n, 0);
  parallel_for(n, Execution{threads}, [&](std::size_t c) {
    const ConvolutionValue v = convolve_at(kernel, window, f, grid.cell_center(c), settings);
    for (int j = 0; j < out.target_dim; ++j) out.values[c * out.target_dim + j] = v.value[j];
    warn[c] = v.warning;
  });
  for (char w : warn) out.warning = out.warning || w;
  return out;
}

FieldOnGrid convolve_field(const KernelPiece& piece, const SourceFunction& f, const GridSpec& grid,
                           const ConvolutionSettings& settings, int threads) {
  FieldOnGrid out = convolve_field(piece.kernel, piece.window(), f, grid, settings, threads);
  out.piece_n = piece.n;
  out.piece_mode = piece.mode == KernelPiece::Mode::single ? "single" : "cumulative";
  return out;
}

LowFrequencyCheck low_freq_sup_check(const HomogeneousKernel& kernel, const SourceFunction& f, int probes_per_axis,
                                     const ConvolutionSettings& settings) {
  const int d = kernel.dim();
  const RadialWindow win = RadialWindow::cumulative(0);
  LowFrequencyCheck out;
  out.rhs = std::pow(2.0, d - kernel.alpha()) * kernel.sphere_sup() * f.l1_norm();
  if (f.empty()) {
    out.holds = true;
    return out;
  }
  std::vector<Vec> probes;
  const Box box = f.bounding_box().expanded(1.0);
  const int n = std::max(2, probes_per_axis);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec x(d);
    std::size_t rem = idx;
    for (int i = 0; i < d; ++i) {
      const auto k = rem % static_cast<std::size_t>(n);
      rem /= static_cast<std::size_t>(n);
      x[i] = box.lo[i] + box.side(i) * static_cast<double>(k) / (n - 1);
    }
    probes.push_back(x);
  }
  const int ring = 4 * n;
  for (const auto& p : f.points()) {
    for (int k = 0; k < ring; ++k) {
      Vec u(d);
      if (d == 2) u = polar_unit(2.0 * M_PI * k / ring);
      else {
        const double z = 1.0 - (2.0 * k + 1.0) / ring;
        const double r = std::sqrt(1.0 - z * z);
        u = Vec{r * std::cos(2.4 * k), r * std::sin(2.4 * k), z};
      }
      probes.push_back(p.location + u * 0.5);
    }
  }
  for (const Vec& x : probes) {
    out.lhs = std::max(out.lhs, convolve_at(kernel, win, f, x, settings).value.norm());
  }
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

}  // namespace philab
