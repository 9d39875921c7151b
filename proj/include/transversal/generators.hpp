#pragma once

#include <cmath>
#include <vector>

#include "transversal/geometry.hpp"
#include "transversal/random.hpp"
#include "transversal/separator.hpp"

namespace transversal {

/// J members, each with k Gaussian normals (full rank almost surely;
/// resampled otherwise).
inline SubspaceFamily random_family(Engine& rng, Eigen::Index n, Eigen::Index k, std::size_t members) {
  detail::require(k >= 1 && k < n, "random_family: need 1 <= k < n");
  std::vector<CodimSubspace> out;
  out.reserve(members);
  while (out.size() < members) {
    Matrix g(n, k);
    for (Eigen::Index c = 0; c < k; ++c)
      for (Eigen::Index r = 0; r < n; ++r) g(r, c) = standard_normal(rng);
    const OrthonormalFrame frame = orthonormalize(g);
    if (frame.size() == k) out.emplace_back(frame);
  }
  return SubspaceFamily(std::move(out));
}

/// Hyperplanes whose unit normals tilt from e_n towards e_1 by angle
/// step * j for member j.
inline SubspaceFamily axis_perturbed_hyperplanes(Eigen::Index n, std::size_t members, double step = 0.1) {
  detail::require(n >= 2, "axis_perturbed_hyperplanes: need n >= 2");
  std::vector<CodimSubspace> out;
  for (std::size_t j = 1; j <= members; ++j) {
    Vector v = Vector::Zero(n);
    const double angle = step * static_cast<double>(j);
    v[0] = std::sin(angle);
    v[n - 1] = std::cos(angle);
    out.emplace_back(OrthonormalFrame(Matrix(v)));
  }
  return SubspaceFamily(std::move(out));
}

/// m x m matrix whose column j is a random unit vector of R^(j+1) x {0}.
inline Matrix random_adapted_vectors(Engine& rng, Eigen::Index m) {
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) a.col(j).head(j + 1) = random_unit_vector(rng, j + 1);
  return a;
}

inline Matrix random_gaussian_matrix(Engine& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = standard_normal(rng);
  return m;
}

}  // namespace transversal
