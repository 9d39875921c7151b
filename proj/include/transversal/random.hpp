#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace transversal {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer applied to (master, stream). Used to give every
/// Monte Carlo sample and every recursive construction step its own
/// reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t master, std::uint64_t stream) {
  return Engine(derive_seed(master, stream));
}

// 53 random mantissa bits; independent of the standard library's
// generate_canonical so draws are identical across toolchains.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double standard_normal(Engine& rng) {
  // Box-Muller on (0,1]; one value per call keeps the stream stateless.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Eigen::VectorXd uniform_in_box(Engine& rng, std::span<const double> halfwidths) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(halfwidths.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double h = halfwidths[static_cast<std::size_t>(i)];
    y[i] = uniform(rng, -h, h);
  }
  return y;
}

inline Eigen::VectorXd random_unit_vector(Engine& rng, Eigen::Index dim) {
  Eigen::VectorXd g(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) g[i] = standard_normal(rng);
    norm = g.norm();
  } while (norm == 0.0);
  return g / norm;
}

/// Uniform point in the Euclidean ball: Gaussian direction scaled by
/// radius * U^(1/dim).
inline Eigen::VectorXd uniform_in_ball(Engine& rng, Eigen::Index dim, double radius = 1.0) {
  const Eigen::VectorXd direction = random_unit_vector(rng, dim);
  const double r = radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(dim));
  return r * direction;
}

}  // namespace transversal
