#include "philab/sampling.hpp"

#include <cmath>

namespace philab {

std::vector<Vec> sphere_samples(int dim, int count) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  if (dim == 1) {
    out.push_back(Vec{1.0});
    out.push_back(Vec{-1.0});
    return out;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) out.push_back(polar_unit(2.0 * M_PI * i / count));
    return out;
  }
  if (dim == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * i;
      out.push_back(Vec{r * std::cos(t), r * std::sin(t), z});
    }
    return out;
  }
  std::mt19937_64 rng(0x5eed5eedULL + static_cast<unsigned>(dim));
  for (int i = 0; i < count; ++i) out.push_back(random_direction(dim, rng));
  return out;
}

Vec random_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Vec random_in_ball(int dim, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec dir = random_direction(dim, rng);
  return dir * (radius * std::pow(unit(rng), 1.0 / dim));
}

}  // namespace philab
