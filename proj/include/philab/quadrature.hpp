#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace philab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Cached n-point Gauss-Legendre rule (thread-safe, references stay valid).
const GaussRule& gauss_legendre(int n);

/// Neumaier compensated accumulator. Order of add() calls fixes the result.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed-order Gauss-Legendre quadrature of f over [a, b].
template <class F>
double gauss_integrate(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  CompensatedSum s;
  for (int i = 0; i < rule.size(); ++i) s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
  return half * s.value();
}

/// Gauss-Legendre after the substitution x = a + (b-a)(1-cos t)/2, t in [0, pi].
/// Removes square-root endpoint behaviour (chords of circles, cone edges).
template <class F>
double gauss_integrate_cosine_graded(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double h = 0.5 * M_PI;
  CompensatedSum s;
  for (int i = 0; i < rule.size(); ++i) {
    const double t = h * (1.0 + rule.nodes[i]);
    const double x = a + 0.5 * (b - a) * (1.0 - std::cos(t));
    const double jac = 0.5 * (b - a) * std::sin(t);
    s.add(rule.weights[i] * jac * f(x));
  }
  return h * s.value();
}

/// Ordinary least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace philab
