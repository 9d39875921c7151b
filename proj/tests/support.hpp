#pragma once

// Test-side generators and brute-force oracles. Nothing here calls into the
// library's numerical routines, so a shared bug cannot cancel out.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Independent of the library's engine derivation on purpose.
inline std::mt19937_64 rng_for(std::uint64_t test_id, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(test_id), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

inline Vec gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline Mat gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

inline Vec unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  Vec v = gaussian_vector(rng, n);
  return v / v.norm();
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Classical Gram-Schmidt on the columns (inputs are generic Gaussians, so
/// conditioning is not an issue at these sizes).
inline Mat classical_gram_schmidt(const Mat& a) {
  Mat q = a;
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (Eigen::Index p = 0; p < c; ++p) q.col(c) -= q.col(p).dot(a.col(c)) * q.col(p);
    q.col(c) /= q.col(c).norm();
  }
  return q;
}

/// min over t in a uniform grid on [lo, hi] of |t x1 + (1 - t) x2|, refined
/// by golden-section search around the best grid point.
inline double brute_line_min(const Vec& x1, const Vec& x2, double lo = -10.0, double hi = 10.0,
                             int steps = 200000) {
  auto f = [&](double t) { return (t * x1 + (1.0 - t) * x2).norm(); };
  double best_t = lo, best = f(lo);
  const double h = (hi - lo) / steps;
  for (int i = 1; i <= steps; ++i) {
    const double t = lo + h * i;
    const double v = f(t);
    if (v < best) best = v, best_t = t;
  }
  double a = best_t - h, b = best_t + h;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return std::min(best, f(0.5 * (a + b)));
}

/// Area of {(x, y) in the unit disk : |y| <= e}.
inline double slab_in_disk_area(double e) {
  if (e >= 1.0) return M_PI;
  return 2.0 * (e * std::sqrt(1.0 - e * e) + std::asin(e));
}

}  // namespace testing_support
