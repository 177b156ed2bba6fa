#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "philab/vec.hpp"

namespace philab {

/// Deterministic, roughly uniform points on S^{dim-1}: equispaced angles on
/// the circle, a Fibonacci lattice on S^2, seeded Gaussian samples otherwise.
std::vector<Vec> sphere_samples(int dim, int count);

/// Uniform random direction in R^dim.
Vec random_direction(int dim, std::mt19937_64& rng);

/// Uniform random point in the ball of radius `radius`.
Vec random_in_ball(int dim, double radius, std::mt19937_64& rng);

}  // namespace philab
