#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

namespace philab {

/// Small dense vector used for points in R^d and kernel values in R^l.
/// Capacity is fixed at kMaxDim; the domain of this library is d, l <= 4.
class Vec {
 public:
  static constexpr int kMaxDim = 4;

  Vec() = default;
  explicit Vec(int n) : n_(n) { assert(n >= 0 && n <= kMaxDim); }
  Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    assert(n_ <= kMaxDim);
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }
  explicit Vec(std::span<const double> xs) : n_(static_cast<int>(xs.size())) {
    assert(n_ <= kMaxDim);
    for (int i = 0; i < n_; ++i) v_[i] = xs[i];
  }

  static Vec unit(int n, int axis) {
    Vec e(n);
    e[axis] = 1.0;
    return e;
  }

  int size() const { return n_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  const double* data() const { return v_.data(); }

  std::vector<double> to_vector() const { return {v_.begin(), v_.begin() + n_}; }

  double squared_norm() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += v_[i] * v_[i];
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }

  Vec& operator+=(const Vec& o) {
    assert(o.n_ == n_);
    for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    assert(o.n_ == n_);
    for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) v_[i] *= s;
    return *this;
  }
  Vec& operator/=(double s) { return *this *= (1.0 / s); }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a /= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i)
      if (a.v_[i] != b.v_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> v_{};
  int n_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

inline Vec normalized(const Vec& a) { return a / a.norm(); }

/// Unit vector at angle theta in the plane.
inline Vec polar_unit(double theta) { return Vec{std::cos(theta), std::sin(theta)}; }

/// Axis-aligned box [lo, hi] (closed or half-open depending on the caller).
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return lo.size(); }
  Vec center() const { return (lo + hi) * 0.5; }
  double side(int axis) const { return hi[axis] - lo[axis]; }
  double diagonal() const { return (hi - lo).norm(); }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
  }
  bool contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  /// Euclidean distance from x to the closed box (0 inside).
  double distance_to(const Vec& x) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double e = 0.0;
      if (x[i] < lo[i]) e = lo[i] - x[i];
      else if (x[i] > hi[i]) e = x[i] - hi[i];
      s += e * e;
    }
    return std::sqrt(s);
  }
  /// Largest Euclidean distance from x to a point of the box.
  double max_distance_to(const Vec& x) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double e = std::max(std::abs(x[i] - lo[i]), std::abs(x[i] - hi[i]));
      s += e * e;
    }
    return std::sqrt(s);
  }
  Box expanded(double margin) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= margin;
      b.hi[i] += margin;
    }
    return b;
  }
  /// Corner number `mask` (bit i selects hi along axis i).
  Vec corner(unsigned mask) const {
    Vec c = lo;
    for (int i = 0; i < dim(); ++i)
      if (mask & (1u << i)) c[i] = hi[i];
    return c;
  }
  int corner_count() const { return 1 << dim(); }
};

inline Box box_union(const Box& a, const Box& b) {
  Box u = a;
  for (int i = 0; i < a.dim(); ++i) {
    u.lo[i] = std::min(a.lo[i], b.lo[i]);
    u.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return u;
}

/// Intersection; may be empty (lo > hi along some axis).
inline Box box_intersection(const Box& a, const Box& b) {
  Box u = a;
  for (int i = 0; i < a.dim(); ++i) {
    u.lo[i] = std::max(a.lo[i], b.lo[i]);
    u.hi[i] = std::min(a.hi[i], b.hi[i]);
  }
  return u;
}

inline bool box_is_empty(const Box& b) {
  for (int i = 0; i < b.dim(); ++i)
    if (!(b.lo[i] < b.hi[i])) return true;
  return false;
}

}  // namespace philab
