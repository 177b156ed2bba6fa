#include "philab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "philab/convolution.hpp"
#include "philab/error.hpp"
#include "philab/sphere.hpp"

namespace philab {

namespace {

using json = nlohmann::ordered_json;

Vec inward_at(const Domain& domain, const Vec& z) {
  if (std::abs(domain.signed_distance(z)) > 1e-9) throw DomainError("blowup: the point is not on the boundary");
  return domain.inward_normal(z);
}

Vec half_space_normal(const Domain& domain) {
  const auto* h = std::get_if<HalfSpaceShape>(&domain.shape());
  if (!h) throw ValidationError("blowup: half-space variants need a half-space domain");
  return h->normal;
}

double full_abs_integral(const HomogeneousKernel& kernel, const PhiIntegrand& phi, const SphereRule& rule) {
  const auto g = phi_of_kernel(kernel, phi, 1);
  return sphere_integral(kernel.dim(), [&](const Vec& z) { return std::abs(g(z)); }, rule);
}

LineFit fit_series(const std::vector<std::pair<double, double>>& series, bool log_x) {
  std::vector<double> x, y;
  for (const auto& [a, b] : series) {
    x.push_back(log_x ? std::log(a) : a);
    y.push_back(b);
  }
  return fit_line(x, y);
}

}  // namespace

BlowupValue blowup_value_plane(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel,
                               const PhiIntegrand& phi, double n, double offset, const IntegrationSettings& settings) {
  const Vec nu = inward_at(domain, z);
  const Domain scaled = domain.transformed(z, n);
  const auto f = SourceFunction::bump(nu * offset, 1.0, 1.0);
  const auto r = integrate_over_domain(scaled, FieldSpec{kernel, RadialWindow::full(), f, phi, 1}, settings);
  return BlowupValue{r.value, 0.0, 0.0, 0.0, r.warning};
}

BlowupValue blowup_value_radial(const Domain& domain, const Vec& z, const HomogeneousKernel& kernel,
                                const PhiIntegrand& phi, double n, double offset, const IntegrationSettings& settings,
                                int psi_nodes) {
  const Vec nu = inward_at(domain, z);
  const Domain scaled = domain.transformed(z, n);
  const Vec origin(domain.dim());
  constexpr double kInner = 4.0;
  const auto f = SourceFunction::bump(nu * offset, 1.0, 1.0);
  if (offset + f.bumps().front().radius() >= kInner) throw ValidationError("blowup: offset too large for the B_4 split");

  BlowupValue out;
  const auto near = integrate_over_domain(Region{{scaled, Domain::ball(origin, kInner)}},
                                          FieldSpec{kernel, RadialWindow::full(), f, phi, 1}, settings);
  out.near = near.value;

  const double reach = n * domain.diameter();
  std::atomic<bool> warned{false};
  ScalarMap g = [&](const Vec& u) {
    const auto cv = convolve_at(kernel, f, u, settings.conv);
    if (cv.warning) warned = true;
    return phi(cv.value) - phi(kernel(u));
  };
  IntegrandHints hints;
  hints.circles.push_back({origin, kInner});
  hints.circles.push_back({f.bumps().front().center, f.bumps().front().radius()});
  hints.grading.push_back({origin, kInner, 2.0 * reach});
  const auto corr =
      integrate_region(Region{{scaled, Domain::ball_exterior(origin, kInner)}}, scaled.bounding_box(), g, hints, settings);
  out.correction = corr.value;

  if (reach > kInner) {
    const SphereRule rule = SphereRule::for_dim(domain.dim(), psi_nodes);
    auto integrand = [&](double s) { return psi_profile(domain, z, kernel, phi, 1, std::exp(s) / n, rule); };
    out.radial = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, std::log(kInner),
                                                                              std::log(reach), 12, 1e-11);
  }
  out.value = out.near + out.correction + out.radial;
  out.warning = near.warning || corr.warning || warned;
  return out;
}

ExperimentResult necessity_blowup(const Domain& domain, const HomogeneousKernel& kernel, const PhiIntegrand& phi,
                                  const BlowupSettings& settings) {
  using Variant = BlowupSettings::Variant;
  if (settings.n_list.size() < 4) throw ValidationError("blowup: n_list needs at least 4 values for a fit");
  for (double n : settings.n_list)
    if (!(n > 0.0)) throw ValidationError("blowup: n values must be positive");

  ExperimentResult res;
  res.id = "blowup";
  res.fit_transform = "log";
  const int d = domain.dim();
  const SphereRule rule = SphereRule::for_dim(d, settings.sphere_nodes);
  const double abs_integral = full_abs_integral(kernel, phi, rule);

  Vec z, nu;
  if (settings.variant == Variant::bounded) {
    if (!domain.bounded()) throw ValidationError("blowup: the bounded variant needs a bounded domain");
    z = settings.boundary_point;
    nu = inward_at(domain, z);
    res.reference = hemisphere_functional(kernel, phi, 1, nu, rule);
  } else {
    nu = half_space_normal(domain);
    z = domain.nearest_boundary_point(Vec(d));
    res.reference = settings.variant == Variant::half_space
                        ? hemisphere_functional(kernel, phi, 1, nu, rule)
                        : sphere_integral(d, phi_of_kernel(kernel, phi, 1), rule);
  }
  const double offset = settings.offset.value_or(settings.variant == Variant::bounded ? 2.0 : 1.0);

  res.columns = {"n", "log_n", "value"};
  if (settings.variant == Variant::bounded && settings.radial)
    res.columns.insert(res.columns.end(), {"near", "correction", "radial"});
  for (double n : settings.n_list) {
    BlowupValue v;
    if (settings.variant == Variant::bounded) {
      v = settings.radial ? blowup_value_radial(domain, z, kernel, phi, n, offset, settings.integration, settings.psi_nodes)
                          : blowup_value_plane(domain, z, kernel, phi, n, offset, settings.integration);
    } else {
      auto f = SourceFunction::bump(z + nu * (offset / n), n, 1.0);
      const double far = settings.variant == Variant::half_space ? 1.0 : offset;
      f.add(SourceFunction::bump(z + nu * far, 1.0, -1.0));
      const auto r = integrate_over_domain(domain, FieldSpec{kernel, RadialWindow::full(), f, phi, 1}, settings.integration);
      v.value = r.value;
      v.warning = r.warning;
    }
    res.warning = res.warning || v.warning;
    res.series.emplace_back(n, v.value);
    std::vector<double> row{n, std::log(n), v.value};
    if (settings.variant == Variant::bounded && settings.radial) row.insert(row.end(), {v.near, v.correction, v.radial});
    res.rows.push_back(row);
  }
  res.fit = fit_series(res.series, true);

  const double slope = res.fit->slope;
  bool pass;
  if (std::abs(res.reference) > 0.1 * abs_integral) {
    res.deviation = std::abs(slope - res.reference) / std::abs(res.reference);
    pass = res.deviation <= 0.1;
  } else {
    res.deviation = std::abs(slope) / abs_integral;
    pass = res.deviation < 0.05;
  }

  json checks = json::array();
  if (settings.variant == Variant::bounded && settings.radial) {
    std::vector<double> probe = settings.cross_check_n;
    if (probe.empty()) {
      const auto& l = settings.n_list;
      probe = {l.front(), l[l.size() / 2], l.back()};
    }
    double worst = 0.0;
    for (double n : probe) {
      const double radial = blowup_value_radial(domain, z, kernel, phi, n, offset, settings.integration,
                                                settings.psi_nodes).value;
      const auto plane = blowup_value_plane(domain, z, kernel, phi, n, offset, settings.integration);
      const double scale = std::max({std::abs(plane.value), 1e-3 * abs_integral});
      const double rel = std::abs(radial - plane.value) / scale;
      worst = std::max(worst, rel);
      checks.push_back(json{{"n", n}, {"radial", radial}, {"plane", plane.value}, {"relative_difference", rel}});
    }
    pass = pass && worst <= settings.cross_check_tol;
    res.details["cross_check_max_relative_difference"] = worst;
  }

  double series_max = 0.0;
  for (const auto& s : res.series) series_max = std::max(series_max, std::abs(s.second));
  res.pass = pass;
  res.details["variant"] = settings.variant == Variant::bounded      ? "bounded"
                           : settings.variant == Variant::half_space ? "half_space"
                                                                     : "far_translation";
  res.details["boundary_point"] = z.to_vector();
  res.details["inward_normal"] = nu.to_vector();
  res.details["offset"] = offset;
  res.details["hemisphere_value"] = res.reference;
  res.details["abs_integral"] = abs_integral;
  res.details["series_max_abs"] = series_max;
  res.details["cross_checks"] = checks;
  return res;
}

SourceFunction sample_source(const Domain& domain, const SamplerSettings& sampler, std::mt19937_64& rng) {
  const int d = domain.dim();
  if (sampler.max_count < 1) throw ValidationError("sampler: max_count must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, sampler.max_count);
  const bool zero_mean = sampler.zero_mean || !domain.bounded();
  const int k = std::max(count(rng), zero_mean ? 2 : 1);
  auto draw_mass = [&] { return (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 0.8 * unit(rng)); };

  if (sampler.kind == SamplerSettings::Kind::point_masses) {
    Box box;
    if (sampler.box) box = *sampler.box;
    else if (domain.bounded()) box = domain.bounding_box();
    else box = Box{Vec(d), Vec(d)}.expanded(1.0);
    std::vector<PointMass> pm;
    for (int i = 0; i < k; ++i) {
      Vec x(d);
      for (int a = 0; a < d; ++a) x[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * unit(rng);
      pm.push_back({x, draw_mass()});
    }
    if (zero_mean) {
      double total = 0.0;
      for (const auto& p : pm) total += p.mass;
      pm.back().mass -= total;
    }
    return SourceFunction::point_masses(pm);
  }

  if (d != 2) throw ValidationError("sampler: boundary bumps are planar only");
  const CurveRange range = domain.boundary_range(Vec(d), 1.0);
  const double log_cap = std::log2(std::max(sampler.scale_cap, 1.0));
  SourceFunction f(d);
  std::vector<Bump> bumps;
  for (int i = 0; i < k; ++i) {
    const Vec z = domain.boundary_point(range.lo + (range.hi - range.lo) * unit(rng));
    const double scale = std::exp2(log_cap * unit(rng));
    bumps.push_back(Bump{z + domain.inward_normal(z) * (2.0 / scale), scale, draw_mass()});
  }
  if (zero_mean) {
    double total = 0.0;
    for (const auto& b : bumps) total += b.mass;
    bumps.back().mass -= total;
  }
  for (const auto& b : bumps) f.add(SourceFunction::bump(b.center, b.scale, b.mass));
  return f;
}

ExperimentResult inequality_ratio_sweep(const Domain& domain, const HomogeneousKernel& kernel,
                                        const PhiIntegrand& phi, const RatioSweepSettings& settings) {
  if (settings.trials < 1) throw ValidationError("ratio sweep: trials must be positive");
  ExperimentResult res;
  res.id = "ratio";
  res.parameter_name = "trial";
  res.value_name = "ratio";
  res.columns = {"trial", "ratio", "running_max", "value", "l1_norm"};
  std::mt19937_64 rng(settings.seed);
  const double p = phi.p();
  double best = 0.0;
  std::string best_descriptor;
  for (int t = 0; t < settings.trials; ++t) {
    const SourceFunction f = sample_source(domain, settings.sampler, rng);
    const double l1 = f.l1_norm();
    const auto r = integrate_over_domain(domain, FieldSpec{kernel, RadialWindow::full(), f, phi, 1}, settings.integration);
    res.warning = res.warning || r.warning;
    const double ratio = l1 > 0.0 ? std::abs(r.value) / std::pow(l1, p) : 0.0;
    if (ratio > best) {
      best = ratio;
      best_descriptor = f.describe();
    }
    res.series.emplace_back(t, ratio);
    res.rows.push_back({static_cast<double>(t), ratio, best, r.value, l1});
  }
  res.reference = best;
  res.pass = std::isfinite(best);
  res.details["max_ratio"] = best;
  res.details["argmax"] = best_descriptor;
  res.details["trials"] = settings.trials;
  return res;
}

ExperimentResult mazya_gradient_demo(const Domain& domain, const PhiIntegrand& phi,
                                     const GradientDemoSettings& settings) {
  if (domain.dim() != 2) throw ValidationError("gradient demo: planar domains only");
  if (phi.target_dim() != 2) throw ValidationError("gradient demo: the integrand must act on R^2");
  if (settings.laplacian.empty()) throw ValidationError("gradient demo: no point masses given");
  if (settings.levels.empty()) throw ValidationError("gradient demo: no truncation levels");
  const auto kernel = builtin::riesz_gradient_kernel(2);
  const auto f = SourceFunction::point_masses(settings.laplacian);

  ExperimentResult res;
  res.id = "demo-gradient";
  res.parameter_name = "level";
  res.fit_transform = "linear";
  res.columns = {"level", "value"};
  for (int level : settings.levels) {
    IntegrationSettings s = settings.integration;
    s.pv_level = level;
    const auto r = integrate_over_domain(domain, FieldSpec{kernel, RadialWindow::full(), f, phi, 1}, s);
    res.warning = res.warning || r.warning;
    res.series.emplace_back(level, r.value);
    res.rows.push_back({static_cast<double>(level), r.value});
  }
  if (res.series.size() >= 2) res.fit = fit_series(res.series, false);

  double inside = 0.0, total = 0.0;
  for (const auto& m : settings.laplacian) {
    total += std::abs(m.mass);
    if (domain.contains(m.location)) inside += std::abs(m.mass);
  }
  const double last = std::abs(res.series.back().second);
  res.reference = last;
  res.pass = std::isfinite(last);
  res.details["laplacian_l1"] = total;
  res.details["laplacian_l1_in_domain"] = inside;
  if (total > 0.0) res.details["ratio"] = last / std::pow(total, phi.p());
  if (inside > 0.0) res.details["ratio_in_domain"] = last / std::pow(inside, phi.p());
  else res.details["ratio_in_domain"] = nullptr;
  return res;
}

}  // namespace philab
