#pragma once

#include <cstdint>
#include <random>

#include "carnot/group.hpp"

namespace carnot {

using Rng = std::mt19937_64;

/// Independent stream `stream` of generator `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double uniform(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);

/// Uniform direction on the Euclidean unit sphere of R^dim.
Vector random_direction(Rng& rng, int dim);

/// Coordinates uniform in [-half, half]^n.
Vector random_box_point(Rng& rng, const CarnotGroup& group, double half = 1.0);

/// Log-uniform value in [lo, hi].
double log_uniform(Rng& rng, double lo, double hi);

}  // namespace carnot
