#include "carnot/sampling.hpp"

#include <cmath>

namespace carnot {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

Vector random_direction(Rng& rng, int dim) {
  Vector v(static_cast<std::size_t>(dim));
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = standard_normal(rng);
    n2 = dot(v, v);
  } while (n2 < 1e-24);
  return (1.0 / std::sqrt(n2)) * v;
}

Vector random_box_point(Rng& rng, const CarnotGroup& group, double half) {
  Vector v(static_cast<std::size_t>(group.dim()));
  for (auto& x : v) x = uniform(rng, -half, half);
  return v;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace carnot
