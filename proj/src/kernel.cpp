#include "philab/kernel.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "philab/error.hpp"
#include "philab/sampling.hpp"

namespace philab {

namespace {

constexpr int kSupSamples = 4096;

double sphere_area(int dim) {
  // sigma(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

struct Rational {
  long long num;
  long long den;
};

// Continued-fraction reconstruction; only accepted if it reproduces x exactly.
std::optional<Rational> as_small_rational(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 40; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e9) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return Rational{h1, k1};
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

HomogeneousKernel::HomogeneousKernel(int dim, int target_dim, double alpha, SphereVectorMap sphere_map,
                                     std::string name, std::optional<double> lipschitz_hint)
    : dim_(dim),
      target_dim_(target_dim),
      alpha_(alpha),
      sphere_map_(std::make_shared<const SphereVectorMap>(std::move(sphere_map))),
      name_(std::move(name)),
      lipschitz_hint_(lipschitz_hint) {
  if (dim < 2 || dim > 3) throw ValidationError("kernel: dimension must be 2 or 3");
  if (target_dim < 1 || target_dim > Vec::kMaxDim) throw ValidationError("kernel: unsupported target dimension");
  if (!(alpha > 0.0 && alpha < dim)) throw ValidationError("kernel: alpha must lie in (0, d)");
  for (const Vec& z : sphere_samples(dim, kSupSamples)) {
    const Vec v = on_sphere(z);
    if (v.size() != target_dim_) throw ValidationError("kernel: sphere map returns wrong dimension");
    const double n = v.norm();
    if (!std::isfinite(n)) throw ValidationError("kernel: sphere map not finite");
    sphere_sup_ = std::max(sphere_sup_, n);
  }
}

Vec HomogeneousKernel::operator()(const Vec& x) const {
  const double r = x.norm();
  if (r == 0.0) throw DomainError("kernel singular at origin");
  return std::pow(r, degree()) * on_sphere(x / r);
}

HomogeneousKernel HomogeneousKernel::rotated(double angle) const {
  if (dim_ != 2) throw ValidationError("kernel rotation is implemented for d = 2");
  auto base = sphere_map_;
  const double c = std::cos(angle), s = std::sin(angle);
  auto map = [base, c, s](const Vec& z) { return (*base)(Vec{c * z[0] + s * z[1], -s * z[0] + c * z[1]}); };
  std::ostringstream name;
  name << name_ << "@rot(" << angle << ")";
  return HomogeneousKernel(dim_, target_dim_, alpha_, map, name.str(), lipschitz_hint_);
}

PhiIntegrand PhiIntegrand::from_sphere_map(int target_dim, double p, ScalarMap sphere_map, std::string name) {
  PhiIntegrand phi;
  phi.target_dim_ = target_dim;
  phi.p_ = p;
  phi.map_ = std::make_shared<const ScalarMap>(std::move(sphere_map));
  phi.name_ = std::move(name);
  phi.finish();
  return phi;
}

PhiIntegrand PhiIntegrand::from_homogeneous(int target_dim, double p, ScalarMap evaluator, std::string name) {
  PhiIntegrand phi;
  phi.target_dim_ = target_dim;
  phi.p_ = p;
  phi.homogeneous_form_ = true;
  phi.map_ = std::make_shared<const ScalarMap>(std::move(evaluator));
  phi.name_ = std::move(name);
  phi.finish();
  return phi;
}

void PhiIntegrand::finish() {
  if (target_dim_ < 1 || target_dim_ > Vec::kMaxDim) throw ValidationError("phi: unsupported target dimension");
  if (!(p_ > 1.0)) throw ValidationError("phi: p must exceed 1");
  for (const Vec& u : sphere_samples(target_dim_, kSupSamples)) {
    const double v = on_sphere(u);
    if (!std::isfinite(v)) throw ValidationError("phi: sphere map not finite");
    sphere_sup_ = std::max(sphere_sup_, std::abs(v));
  }
}

double PhiIntegrand::on_sphere(const Vec& u) const { return (*map_)(u); }

double PhiIntegrand::operator()(const Vec& v) const {
  if (homogeneous_form_) return (*map_)(v);
  const double r = v.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, p_) * (*map_)(v / r);
}

RadialWindow RadialWindow::piece(int n) { return {std::ldexp(1.0, -n - 1), std::ldexp(1.0, -n)}; }

RadialWindow RadialWindow::cumulative(int n) {
  return {std::ldexp(1.0, -n - 1), std::numeric_limits<double>::infinity()};
}

Vec kernel_eval(const HomogeneousKernel& kernel, const Vec& x) { return kernel(x); }

Vec windowed_kernel_eval(const HomogeneousKernel& kernel, const RadialWindow& window, const Vec& x) {
  const double r = x.norm();
  if (!window.contains(r)) return Vec(kernel.target_dim());
  return kernel(x);
}

Vec kernel_piece_eval(const KernelPiece& piece, const Vec& x) {
  return windowed_kernel_eval(piece.kernel, piece.window(), x);
}

double phi_eval(const PhiIntegrand& phi, const Vec& v) { return phi(v); }

double m_p(double p, double x, double y) {
  if (x < 0.0 || y < 0.0) throw DomainError("m_p: arguments must be nonnegative");
  if (p < 1.0) throw DomainError("m_p: p must be at least 1");
  if (x == 0.0 || y == 0.0) return 0.0;
  const double a = std::pow(x, p - 1.0) * y;
  const double b = x * std::pow(y, p - 1.0);
  if (p <= 2.0) return std::min(a, b);
  return 0.5 * (a + b);
}

PerturbationProbe phi_perturbation_probe(const PhiIntegrand& phi, std::size_t trials, std::uint64_t seed,
                                         double constraint_factor) {
  if (trials < 1) throw ValidationError("perturbation probe: need at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  const int l = phi.target_dim();
  const double p = phi.p();
  PerturbationProbe out;
  for (std::size_t t = 0; t < trials; ++t) {
    const double a_norm = std::pow(10.0, log_scale(rng));
    const Vec a = random_direction(l, rng) * a_norm;
    const Vec b = random_in_ball(l, 0.5 * a_norm, rng);
    const double b_norm = b.norm();
    if (b_norm == 0.0 || constraint_factor * b_norm > a_norm) continue;
    const double ratio = std::abs(phi(a + b) - phi(a)) / (std::pow(a_norm, p - 1.0) * b_norm);
    out.constant = std::max(out.constant, ratio);
    ++out.pairs_used;
  }
  return out;
}

void check_homogeneity(int dim, double alpha, double p) {
  std::ostringstream msg;
  msg << "homogeneity relation p*(d-alpha) = d violated: p=" << p << ", d=" << dim << ", alpha=" << alpha;
  if (!(alpha > 0.0 && alpha < dim)) throw ValidationError(msg.str() + " (alpha must lie in (0,d))");
  const auto ra = as_small_rational(alpha);
  const auto rp = as_small_rational(p);
  if (ra && rp) {
    // p = pn/pd, alpha = an/ad:  pn (d ad - an) == d ad pd
    const __int128 lhs = static_cast<__int128>(rp->num) * (static_cast<__int128>(dim) * ra->den - ra->num);
    const __int128 rhs = static_cast<__int128>(dim) * ra->den * rp->den;
    if (lhs != rhs) throw ValidationError(msg.str());
    return;
  }
  if (std::abs(p * (dim - alpha) - dim) > 1e-12 * dim) throw ValidationError(msg.str());
}

namespace builtin {

HomogeneousKernel identity_kernel(int dim, double alpha) {
  std::ostringstream name;
  name << "identity(d=" << dim << ",alpha=" << alpha << ")";
  return HomogeneousKernel(dim, dim, alpha, [](const Vec& z) { return z; }, name.str(), 1.0);
}

HomogeneousKernel riesz_gradient_kernel(int dim) {
  const double c = 1.0 / sphere_area(dim);
  return HomogeneousKernel(dim, dim, 1.0, [c](const Vec& z) { return z * c; }, "riesz_gradient", c);
}

double FourierSeries::operator()(double theta) const {
  double s = constant;
  for (std::size_t k = 0; k < cos.size(); ++k) s += cos[k] * std::cos((k + 1.0) * theta);
  for (std::size_t k = 0; k < sin.size(); ++k) s += sin[k] * std::sin((k + 1.0) * theta);
  return s;
}

HomogeneousKernel fourier_kernel(double alpha, std::vector<FourierSeries> components) {
  const int l = static_cast<int>(components.size());
  double lip = 0.0;
  for (const auto& c : components) {
    double li = 0.0;
    for (std::size_t k = 0; k < c.cos.size(); ++k) li += (k + 1.0) * std::abs(c.cos[k]);
    for (std::size_t k = 0; k < c.sin.size(); ++k) li += (k + 1.0) * std::abs(c.sin[k]);
    lip += li * li;
  }
  auto map = [components = std::move(components), l](const Vec& z) {
    const double t = std::atan2(z[1], z[0]);
    Vec v(l);
    for (int i = 0; i < l; ++i) v[i] = components[i](t);
    return v;
  };
  return HomogeneousKernel(2, l, alpha, map, "fourier", std::sqrt(lip));
}

HomogeneousKernel table_kernel(double alpha, SphereTable table) {
  const int d = table.sphere_dim();
  const int l = table.value_dim();
  return HomogeneousKernel(d, l, alpha, [table = std::move(table)](const Vec& z) { return table(z); }, "table");
}

PhiIntegrand trace_free_quadratic_phi() {
  return PhiIntegrand::from_homogeneous(
      2, 2.0, [](const Vec& v) { return v[0] * v[0] - v[1] * v[1]; }, "trace_free_quadratic");
}

PhiIntegrand quadratic_phi(int target_dim, std::vector<double> matrix) {
  if (static_cast<int>(matrix.size()) != target_dim * target_dim)
    throw ValidationError("quadratic phi: matrix must be l x l");
  return PhiIntegrand::from_homogeneous(
      target_dim, 2.0,
      [m = std::move(matrix), target_dim](const Vec& v) {
        double s = 0.0;
        for (int i = 0; i < target_dim; ++i)
          for (int j = 0; j < target_dim; ++j) s += v[i] * m[i * target_dim + j] * v[j];
        return s;
      },
      "quadratic");
}

PhiIntegrand norm_power_phi(int target_dim, double p) {
  return PhiIntegrand::from_homogeneous(
      target_dim, p, [p](const Vec& v) { return std::pow(v.norm(), p); }, "norm_power");
}

PhiIntegrand first_component_phi(int target_dim, double p) {
  return PhiIntegrand::from_homogeneous(
      target_dim, p, [p](const Vec& v) { return v[0] * std::pow(v.norm(), p - 1.0); }, "first_component");
}

PhiIntegrand angular_phi(double p, FourierSeries series) {
  return PhiIntegrand::from_sphere_map(
      2, p, [s = std::move(series)](const Vec& u) { return s(std::atan2(u[1], u[0])); }, "angular");
}

PhiIntegrand table_phi(double p, SphereTable table) {
  if (table.value_dim() != 1) throw ValidationError("phi table must have exactly one value column");
  const int l = table.sphere_dim();
  return PhiIntegrand::from_sphere_map(
      l, p, [t = std::move(table)](const Vec& u) { return t(u)[0]; }, "table");
}

}  // namespace builtin

}  // namespace philab
