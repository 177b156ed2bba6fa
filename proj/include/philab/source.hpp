#pragma once

#include <array>
#include <string>
#include <vector>

#include "philab/vec.hpp"

namespace philab {

struct PointMass {
  Vec location;
  double mass = 0.0;
};

/// mass * scale^d * (1 - |scale (y - center)|^2)^2 / c_d, supported in |y - center| < 1/scale.
struct Bump {
  Vec center;
  double scale = 1.0;
  double mass = 1.0;

  double radius() const { return 1.0 / scale; }
  double density(const Vec& y) const;
};

/// L^1 normalisation of the profile (1 - |t|^2)^2 over the unit ball.
double bump_profile_integral(int dim);

/// Piecewise-constant density on a uniform grid; cell (i, j[, k]) has lower
/// corner origin + spacing * (i, j[, k]). Values are stored row-major with the
/// last index fastest.
struct GridField {
  Vec origin;
  double spacing = 1.0;
  std::array<int, 3> extents{};
  std::vector<double> values;

  int dim() const { return origin.size(); }
  std::size_t cell_count() const;
  Box cell_box(std::size_t flat) const;
  Box box() const;
  double density(const Vec& y) const;
};

/// Compactly supported f as a signed combination of point masses, bumps and grid fields.
class SourceFunction {
 public:
  SourceFunction() = default;
  explicit SourceFunction(int dim) : dim_(dim) {}

  static SourceFunction point_masses(std::vector<PointMass> masses);
  static SourceFunction bump(const Vec& center, double scale, double mass = 1.0);
  static SourceFunction grid(GridField field);

  int dim() const { return dim_; }
  bool empty() const { return points_.empty() && bumps_.empty() && grids_.empty(); }
  const std::vector<PointMass>& points() const { return points_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  const std::vector<GridField>& grids() const { return grids_; }

  /// Integral of f.
  double mass() const;
  /// ||f||_1. Exact for point masses (coincident locations merged) and for
  /// bumps with disjoint supports; overlapping continuous parts are integrated numerically.
  double l1_norm() const;
  bool mean_zero() const;
  Box bounding_box() const;
  /// Continuous part of f at y (point masses excluded).
  double density(const Vec& y) const;
  /// Integral of |f| over the half-open box [lo, hi).
  double abs_mass_in(const Box& box) const;

  /// Atoms approximating |f| restricted to box: point masses exactly, the continuous
  /// part by cells of size about h carrying their |f|-mass at the cell centroid.
  std::vector<PointMass> abs_atoms_in(const Box& box, double h) const;

  SourceFunction& add(const SourceFunction& other);
  SourceFunction scaled(double lambda) const;
  SourceFunction translated(const Vec& shift) const;
  /// f_n(x) = n^d f(n x).
  SourceFunction dilated(double n) const;

  std::string describe() const;

 private:
  int dim_ = 0;
  std::vector<PointMass> points_;
  std::vector<Bump> bumps_;
  std::vector<GridField> grids_;
};

}  // namespace philab
