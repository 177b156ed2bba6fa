#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "philab/vec.hpp"

namespace philab {

/// Boundary perturbation s(theta) of a graph disk r(theta) = R (1 + a s(theta)).
struct BoundaryProfile {
  enum class Kind { cosine, holder };
  Kind kind = Kind::cosine;
  int frequency = 3;
  /// Hoelder exponent of s'; the cosine profile is smooth and reports 1.
  double beta = 1.0;

  double value(double theta) const;
  double derivative(double theta) const;
  /// sup |s'| over the circle.
  double derivative_bound() const;
};

struct BallShape {
  Vec center;
  double radius = 1.0;
  /// Complement of the closed ball.
  bool exterior = false;
};

/// {x : <x, normal> > offset}
struct HalfSpaceShape {
  Vec normal;
  double offset = 0.0;
};

struct GraphDiskShape {
  Vec center;
  double radius = 1.0;
  double amplitude = 0.0;
  BoundaryProfile profile;
};

/// Parameter interval of a planar boundary curve.
struct CurveRange {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = true;
};

/// Open domain given by a signed distance: negative inside, zero on the boundary.
class Domain {
 public:
  static Domain ball(Vec center, double radius);
  static Domain ball_exterior(Vec center, double radius);
  static Domain half_space(Vec normal, double offset = 0.0);
  static Domain graph_disk(Vec center, double radius, double amplitude, BoundaryProfile profile);

  int dim() const;
  bool bounded() const;
  std::string kind() const;
  const std::variant<BallShape, HalfSpaceShape, GraphDiskShape>& shape() const { return shape_; }

  /// Hoelder exponent of the boundary normal (1 for ball and half-space).
  double beta() const;
  double diameter() const;
  /// Bounding box of a bounded domain.
  Box bounding_box() const;

  double signed_distance(const Vec& x) const;
  bool contains(const Vec& x) const;
  /// Unit normal pointing into the domain at a boundary point.
  Vec inward_normal(const Vec& z) const;
  Vec nearest_boundary_point(const Vec& x) const;
  /// True iff the closed box meets the boundary.
  bool box_meets_boundary(const Box& box) const;

  /// Image under x -> scale * (x - origin).
  Domain transformed(const Vec& origin, double scale) const;

  // Planar boundary parametrisation (d = 2).
  CurveRange boundary_range(const Vec& near, double radius) const;
  Vec boundary_point(double t) const;

  /// y-coordinates where the boundary crosses the vertical line at x, within (ylo, yhi). d = 2.
  std::vector<double> vertical_crossings(double x, double ylo, double yhi) const;
  /// x-coordinates inside (box.lo[0], box.hi[0]) where the boundary has a vertical
  /// tangent or crosses the horizontal edges of the box. d = 2.
  std::vector<double> x_breakpoints(const Box& box) const;

  /// Sampled estimate of C in |h(y)| <= C |y|^{1+beta} for the local graph h of
  /// the boundary over its tangent line. d = 2.
  double holder_constant_estimate(int boundary_samples = 64, double window = 0.05) const;

 private:
  explicit Domain(std::variant<BallShape, HalfSpaceShape, GraphDiskShape> s) : shape_(std::move(s)) {}

  // Graph disk helpers.
  double graph_radius(double theta) const;
  Vec graph_point(double theta) const;
  Vec graph_tangent(double theta) const;
  double graph_speed_bound() const;
  double graph_nearest_parameter(const Vec& x) const;

  std::variant<BallShape, HalfSpaceShape, GraphDiskShape> shape_;
};

/// Dyadic cube prod_i [2^{-k} j_i, 2^{-k}(j_i + 1)).
struct DyadicCube {
  int dim = 2;
  int generation = 0;
  std::array<std::int64_t, 3> index{};

  static DyadicCube containing(const Vec& x, int generation);

  double side() const;
  Vec lower_corner() const;
  Vec center() const;
  Box box() const;
  /// Cube with the same center and side lambda * side().
  Box dilated(double lambda) const;
  DyadicCube parent() const;
  std::vector<DyadicCube> children() const;
  bool contains(const Vec& x) const;

  auto operator<=>(const DyadicCube&) const = default;
};

/// Boundary cube: the closed cube (d+2)Q meets the boundary.
bool is_boundary_cube(const Domain& domain, const DyadicCube& cube);
/// Same predicate for a general cube given by center and side length.
bool is_boundary_cube(const Domain& domain, const Vec& center, double side);

/// Domain intersected with extra half-spaces; used to split integration regions.
struct Region {
  std::vector<Domain> parts;

  static Region of(const Domain& d) { return Region{{d}}; }
  bool contains(const Vec& x) const {
    for (const auto& p : parts)
      if (!p.contains(x)) return false;
    return true;
  }
  int dim() const { return parts.front().dim(); }
};

}  // namespace philab
