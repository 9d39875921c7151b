#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "transversal/error.hpp"
#include "transversal/geometry.hpp"
#include "transversal/random.hpp"
#include "transversal/stats.hpp"

namespace transversal {

inline constexpr double kUnitNormalTol = 1e-10;

/// Axis-aligned box prod_i [-h_i, h_i].
class Box {
 public:
  explicit Box(std::vector<double> halfwidths) : halfwidths_(std::move(halfwidths)) {
    detail::require(!halfwidths_.empty(), "Box: no halfwidths");
    for (double h : halfwidths_)
      detail::require(h > 0.0 && std::isfinite(h), "Box: halfwidths must be positive and finite");
  }

  static Box cube(std::size_t n, double halfwidth = 1.0) {
    return Box(std::vector<double>(n, halfwidth));
  }

  /// prod_{j=1..n} [-j^-2, j^-2]
  static Box inverse_square(std::size_t n) {
    std::vector<double> h(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double jj = static_cast<double>(j + 1);
      h[j] = 1.0 / (jj * jj);
    }
    return Box(std::move(h));
  }

  std::size_t dim() const { return halfwidths_.size(); }
  std::span<const double> halfwidths() const { return halfwidths_; }

  double volume() const {
    double v = 1.0;
    for (double h : halfwidths_) v *= 2.0 * h;
    return v;
  }

  bool contains(const Vector& y) const {
    if (static_cast<std::size_t>(y.size()) != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (std::abs(y[static_cast<Eigen::Index>(i)]) > halfwidths_[i]) return false;
    return true;
  }

  /// Length of the longest diagonal.
  double diameter() const {
    double s = 0.0;
    for (double h : halfwidths_) s += 4.0 * h * h;
    return std::sqrt(s);
  }

 private:
  std::vector<double> halfwidths_;
};

namespace detail {

inline void require_unit_normal(const Box& box, const Vector& v, const char* who) {
  require(static_cast<std::size_t>(v.size()) == box.dim(), std::string(who) + ": dimension mismatch");
  require(std::abs(v.norm() - 1.0) <= kUnitNormalTol, std::string(who) + ": normal is not a unit vector");
}

}  // namespace detail

/// (n-1)-volume of the orthogonal projection of the box onto the hyperplane
/// with unit normal v: sum_i (prod_{k != i} 2 h_k) |v_i|. This is half the
/// sum over all 2n faces of vol(face) * |<face normal, v>|.
inline double box_projection_volume(const Box& box, const Vector& v) {
  detail::require_unit_normal(box, v, "box_projection_volume");
  const auto h = box.halfwidths();
  CompensatedSum total;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double face = 1.0;
    for (std::size_t k = 0; k < h.size(); ++k)
      if (k != i) face *= 2.0 * h[k];
    total.add(face * std::abs(v[static_cast<Eigen::Index>(i)]));
  }
  return total.value();
}

/// Upper bound 2 * delta * vol(projection) on the measure of the slab
/// {y in box : |<y, v>| <= delta}.
inline double slab_measure_bound(const Box& box, const Vector& v, double delta) {
  detail::require(delta > 0.0, "slab_measure_bound: delta must be positive");
  return 2.0 * delta * box_projection_volume(box, v);
}

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
};

inline constexpr std::size_t kMinMcSamples = 1000;

/// Hit-or-miss estimate of the slab measure: vol(box) times the fraction of
/// uniform box points with |<y, v>| <= delta, with binomial standard error.
inline McEstimate mc_slab_measure(const Box& box, const Vector& v, double delta, std::size_t samples,
                                  std::uint64_t seed) {
  detail::require(samples >= kMinMcSamples, "mc_slab_measure: need at least 1000 samples");
  detail::require_unit_normal(box, v, "mc_slab_measure");
  detail::require(delta > 0.0, "mc_slab_measure: delta must be positive");
  Engine rng = make_engine(seed, 0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector y = uniform_in_box(rng, box.halfwidths());
    if (std::abs(y.dot(v)) <= delta) ++hits;
  }
  const double fraction = static_cast<double>(hits) / static_cast<double>(samples);
  return {box.volume() * fraction, box.volume() * binomial_stderr(fraction, samples), samples, hits};
}

/// Monte Carlo estimate of the projected (shadow) volume, computed without
/// the face formula. For n = 2 it projects uniform box samples onto the line
/// orthogonal to v and measures the covered interval. For larger n it
/// draws points uniformly in a bounding box of the shadow (in coordinates of
/// v^perp) and counts those whose line along v meets the box.
inline McEstimate mc_shadow_volume(const Box& box, const Vector& v, std::size_t samples,
                                   std::uint64_t seed) {
  detail::require(samples >= kMinMcSamples, "mc_shadow_volume: need at least 1000 samples");
  detail::require_unit_normal(box, v, "mc_shadow_volume");
  const auto h = box.halfwidths();
  const auto n = static_cast<Eigen::Index>(box.dim());
  if (n == 1) return {1.0, 0.0, samples, samples};

  // Orthonormal basis U of v^perp: complete v to a frame and drop it.
  Matrix seed_columns(n, n + 1);
  seed_columns.col(0) = v;
  seed_columns.rightCols(n) = Matrix::Identity(n, n);
  const Matrix frame = orthonormalize(seed_columns).matrix();
  const Matrix u = frame.rightCols(n - 1);

  Engine rng = make_engine(seed, 0);
  if (n == 2) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t s = 0; s < samples; ++s) {
      const double t = uniform_in_box(rng, h).dot(u.col(0));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    // the extent estimate converges from below; report the gap of one
    // expected spacing as its uncertainty
    const double length = hi - lo;
    return {length, length / std::sqrt(static_cast<double>(samples)), samples, samples};
  }

  // bounding box of the shadow in U-coordinates
  Vector reach = Vector::Zero(n - 1);
  for (Eigen::Index l = 0; l < n - 1; ++l)
    for (Eigen::Index i = 0; i < n; ++i) reach[l] += h[static_cast<std::size_t>(i)] * std::abs(u(i, l));
  double bounding_volume = 1.0;
  for (Eigen::Index l = 0; l < n - 1; ++l) bounding_volume *= 2.0 * reach[l];

  std::size_t hits = 0;
  Vector p(n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index l = 0; l < n - 1; ++l) p[l] = uniform(rng, -reach[l], reach[l]);
    const Vector point = u * p;
    // the line point + t v meets the box iff the per-axis t-intervals overlap
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    bool hit = true;
    for (Eigen::Index i = 0; i < n && hit; ++i) {
      const double hi_i = h[static_cast<std::size_t>(i)];
      if (v[i] == 0.0) {
        hit = std::abs(point[i]) <= hi_i;
      } else {
        double a = (-hi_i - point[i]) / v[i];
        double b = (hi_i - point[i]) / v[i];
        if (a > b) std::swap(a, b);
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
        hit = t_lo <= t_hi;
      }
    }
    if (hit) ++hits;
  }
  const double fraction = static_cast<double>(hits) / static_cast<double>(samples);
  return {bounding_volume * fraction, bounding_volume * binomial_stderr(fraction, samples), samples, hits};
}

}  // namespace transversal
