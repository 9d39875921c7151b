#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transversal/error.hpp"
#include "transversal/geometry.hpp"
#include "transversal/polytope.hpp"
#include "transversal/random.hpp"
#include "transversal/stats.hpp"

namespace transversal {

// Cube sampler: accept when |<y, v_j>| >= 1/(2 k sqrt(n)); certified bound
// for the normalized vector is 1/(2 k n).
//
// Box sampler on prod [-j^-2, j^-2]: accept when |<y, v_j>| >= 3 pi^-2 j^-5.
// Since |y|^2 <= sum j^-4 = pi^4/90, the normalized vector satisfies
// |<x, v_j>| >= 3 sqrt(90) pi^-4 j^-5.
inline const double kBoxSlabScale = 3.0 / (M_PI * M_PI);
inline const double kBoxNormCeiling = M_PI * M_PI / std::sqrt(90.0);
inline const double kBoxSeparatorConstant = 3.0 * std::sqrt(90.0) / (M_PI * M_PI * M_PI * M_PI);
// Euclidean line lemma: inf_t |t x1 + (1-t) x2| >= mu1 mu2 / sqrt(5).
inline const double kLineConstant = 1.0 / std::sqrt(5.0);

inline constexpr int kDefaultMaxTries = 64;
inline constexpr double kDominanceTol = 1e-9;
// degree_of_transversality at or below this value is reported as zero
inline constexpr double kZeroTransversality = 1e-13;

inline double box_slab_threshold(std::size_t j) {
  return kBoxSlabScale * std::pow(static_cast<double>(j), -5.0);
}

inline double box_certified_bound(std::size_t j) {
  return kBoxSeparatorConstant * std::pow(static_cast<double>(j), -5.0);
}

/// Finite family (V_1, ..., V_J) of subspaces sharing ambient dimension and
/// codimension.
class SubspaceFamily {
 public:
  explicit SubspaceFamily(std::vector<CodimSubspace> members) : members_(std::move(members)) {
    detail::require(!members_.empty(), "SubspaceFamily: need at least one member");
    for (const auto& m : members_) {
      detail::require(m.ambient_dim() == members_.front().ambient_dim(),
                      "SubspaceFamily: members differ in ambient dimension");
      detail::require(m.codim() == members_.front().codim(), "SubspaceFamily: members differ in codimension");
    }
  }

  Eigen::Index ambient_dim() const { return members_.front().ambient_dim(); }
  Eigen::Index codim() const { return members_.front().codim(); }
  std::size_t size() const { return members_.size(); }
  const CodimSubspace& operator[](std::size_t j) const { return members_[j]; }
  const std::vector<CodimSubspace>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<CodimSubspace> members_;
};

enum class Provenance { certified_by_construction, measured_by_svd };

inline const char* to_string(Provenance p) {
  return p == Provenance::certified_by_construction ? "certified-by-construction" : "measured-by-svd";
}

/// Least-squares line through (log j, log delta_j). A profile delta_j =
/// scale * j^slope has decay exponent -slope.
struct DecayFit {
  double slope = 0.0;
  double log_scale = 0.0;
  double exponent() const { return -slope; }
  double scale() const { return std::exp(log_scale); }
};

/// Fit over the strictly positive entries; index j is 1-based.
inline DecayFit fit_decay(std::span<const double> deltas) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] > 0.0) {
      lx.push_back(std::log(static_cast<double>(i + 1)));
      ly.push_back(std::log(deltas[i]));
    }
  }
  if (lx.empty()) return {0.0, -std::numeric_limits<double>::infinity()};
  const LinearFit line = least_squares_line(lx, ly);
  return {line.slope, line.intercept};
}

struct SeparationCertificate {
  std::vector<double> deltas;
  Provenance provenance = Provenance::measured_by_svd;
  std::map<std::string, double> constants;
  DecayFit decay_fit;
  /// 1-based indices whose transversality vanished (measured certificates only)
  std::vector<std::size_t> zero_indices;

  bool is_common_complement() const { return zero_indices.empty(); }
};

struct RejectionStats {
  std::size_t attempted = 0;
  std::size_t accepted = 0;

  RejectionStats& operator+=(const RejectionStats& o) {
    attempted += o.attempted;
    accepted += o.accepted;
    return *this;
  }
  double acceptance_rate() const {
    return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
  }
};

struct ComplementResult {
  SpanSubspace complement;
  SeparationCertificate certificate;
  SeparationCertificate measured;
  std::uint64_t rng_seed = 0;
  RejectionStats rejection_stats;
};

/// A posteriori certificate: delta_j = degree_of_transversality(C, V_j) and
/// the log-log decay fit of that profile.
inline SeparationCertificate certify(const SpanSubspace& c, const SubspaceFamily& family) {
  detail::require(c.ambient_dim() == family.ambient_dim(), "certify: dimension mismatch");
  detail::require(c.dim() == family.codim(), "certify: dim(C) must equal the family's codimension");
  SeparationCertificate cert;
  cert.provenance = Provenance::measured_by_svd;
  cert.deltas.reserve(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    double d = degree_of_transversality(c, family[j]);
    if (d <= kZeroTransversality) {
      d = 0.0;
      cert.zero_indices.push_back(j + 1);
    }
    cert.deltas.push_back(d);
  }
  cert.decay_fit = fit_decay(cert.deltas);
  return cert;
}

struct WellSeparation {
  bool well_separating = false;
  double exponent = 0.0;  // fitted p in delta_j >= eps j^-p
  double scale = 0.0;     // eps = min_j delta_j j^p
};

/// Finite-horizon proxy for subexponential decay: fit p by log-log
/// regression, take eps = min_j delta_j j^p, and accept when p does not
/// exceed max_exponent (and eps > 0).
inline WellSeparation assess_well_separation(std::span<const double> deltas, double max_exponent) {
  detail::require(deltas.size() >= 3, "is_well_separating: need at least 3 indices");
  for (double d : deltas)
    detail::require(d > 0.0 && std::isfinite(d), "is_well_separating: deltas must be positive");
  WellSeparation out;
  out.exponent = fit_decay(deltas).exponent();
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < deltas.size(); ++i)
    eps = std::min(eps, deltas[i] * std::pow(static_cast<double>(i + 1), out.exponent));
  out.scale = eps;
  out.well_separating = out.exponent <= max_exponent && eps > 0.0;
  return out;
}

inline bool is_well_separating(const SeparationCertificate& cert, double max_exponent) {
  return assess_well_separation(cert.deltas, max_exponent).well_separating;
}

// ---------------------------------------------------------------------------
// Rejection samplers

struct CubeSeparator {
  Vector x;                // unit vector
  Vector draw;             // accepted y in [-1, 1]^n
  double certified_bound;  // 1 / (2 k n)
  RejectionStats stats;
};

/// Draws y uniform in [-1, 1]^n until |<y, v_j>| >= 1/(2 k sqrt(n)) for all
/// k normals, then returns y / |y|. At most half the cube is rejected, so a
/// draw succeeds with probability at least 1/2.
inline CubeSeparator sample_cube_separator(std::span<const Vector> normals, std::uint64_t seed,
                                           int max_tries = kDefaultMaxTries) {
  const Eigen::Index n = detail::common_dimension(normals, "sample_cube_separator");
  detail::require(max_tries >= 1, "sample_cube_separator: max_tries must be at least 1");
  for (std::size_t j = 0; j < normals.size(); ++j)
    detail::require(std::abs(normals[j].norm() - 1.0) <= kUnitNormalTol,
                    "sample_cube_separator: normal " + std::to_string(j + 1) + " is not a unit vector");
  const auto k = static_cast<double>(normals.size());
  const double dn = static_cast<double>(n);
  const double threshold = 0.5 / (k * std::sqrt(dn));
  const double bound = 0.5 / (k * dn);
  const std::vector<double> halfwidths(static_cast<std::size_t>(n), 1.0);

  Engine rng = make_engine(seed, 0);
  RejectionStats stats;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    ++stats.attempted;
    const Vector y = uniform_in_box(rng, halfwidths);
    const bool accepted =
        std::all_of(normals.begin(), normals.end(), [&](const Vector& v) { return std::abs(y.dot(v)) >= threshold; });
    if (!accepted) continue;
    ++stats.accepted;
    const Vector x = y / y.norm();
    for (std::size_t j = 0; j < normals.size(); ++j)
      if (std::abs(x.dot(normals[j])) < bound)
        throw AlgorithmError("sample_cube_separator: certified bound violated at normal " + std::to_string(j + 1));
    return {x, y, bound, stats};
  }
  throw AlgorithmError("sample_cube_separator: no acceptable draw in " + std::to_string(max_tries) + " tries");
}

/// Orthonormal (c_j) with v_j in span(c_1..c_j), plus the coordinates
/// <v_i, c_k>. Column i of `coordinates` holds the c-coordinates of v_i and
/// vanishes below row i.
struct AdaptedBasis {
  OrthonormalFrame frame;
  Matrix coordinates;
};

inline AdaptedBasis adapt_basis(std::span<const Vector> v_list, Eigen::Index ambient_dim,
                                double tol = kDefaultRankTol) {
  detail::require(!v_list.empty(), "adapt_basis: empty input");
  detail::require(static_cast<Eigen::Index>(v_list.size()) <= ambient_dim,
                  "adapt_basis: more vectors than ambient dimension");
  for (std::size_t j = 0; j < v_list.size(); ++j) {
    detail::require(v_list[j].size() == ambient_dim, "adapt_basis: dimension mismatch");
    detail::require(std::abs(v_list[j].norm() - 1.0) <= kUnitNormalTol,
                    "adapt_basis: vector " + std::to_string(j + 1) + " is not a unit vector");
  }
  const auto m = static_cast<Eigen::Index>(v_list.size());
  Matrix c(ambient_dim, m);

  auto residual = [&](Vector w, Eigen::Index count) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index q = 0; q < count; ++q) w -= c.col(q).dot(w) * c.col(q);
    return w;
  };

  for (Eigen::Index j = 0; j < m; ++j) {
    Vector w = residual(v_list[static_cast<std::size_t>(j)], j);
    double r = w.norm();
    if (r <= tol) {
      // v_j already lies in span(c_1..c_{j-1}); insert the standard basis
      // direction with the largest component orthogonal to that span.
      double best = 0.0;
      for (Eigen::Index e = 0; e < ambient_dim; ++e) {
        const Vector cand = residual(Vector::Unit(ambient_dim, e), j);
        if (cand.norm() > best) {
          best = cand.norm();
          w = cand;
        }
      }
      r = best;
      if (r <= tol) throw InputError("adapt_basis: no room for a filler direction");
    }
    c.col(j) = w / r;
  }
  Matrix coords(m, m);
  for (Eigen::Index i = 0; i < m; ++i) coords.col(i) = c.transpose() * v_list[static_cast<std::size_t>(i)];
  return {OrthonormalFrame(std::move(c)), std::move(coords)};
}

struct BoxSeparator {
  Vector x;                            // unit vector, same coordinates as the input
  Vector draw;                         // accepted y in prod [-j^-2, j^-2]
  std::vector<double> certified;       // c j^-5
  std::vector<double> chain_bounds;    // 3 pi^-2 j^-5 / |y|, never below certified
  RejectionStats stats;
};

/// Rejection sampler on prod_{j=1..d} [-j^-2, j^-2] for adapted unit
/// vectors (column j of `adapted` vanishes below row j). Acceptance per draw
/// is at least 1/2.
inline BoxSeparator sample_box_separator(const Matrix& adapted, std::uint64_t seed,
                                         int max_tries = kDefaultMaxTries, double tol = 1e-9) {
  const Eigen::Index d = adapted.rows();
  const Eigen::Index m = adapted.cols();
  detail::require(m >= 1 && d >= m, "sample_box_separator: need 1 <= count <= dimension");
  detail::require(max_tries >= 1, "sample_box_separator: max_tries must be at least 1");
  for (Eigen::Index j = 0; j < m; ++j) {
    detail::require(std::abs(adapted.col(j).norm() - 1.0) <= tol,
                    "sample_box_separator: vector " + std::to_string(j + 1) + " is not a unit vector");
    if (j + 1 < d)
      detail::require(adapted.col(j).tail(d - j - 1).cwiseAbs().maxCoeff() <= tol,
                      "sample_box_separator: adaptation violated at vector " + std::to_string(j + 1));
  }
  const Box box = Box::inverse_square(static_cast<std::size_t>(d));
  std::vector<double> thresholds(static_cast<std::size_t>(m));
  std::vector<double> certified(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    thresholds[static_cast<std::size_t>(j)] = box_slab_threshold(static_cast<std::size_t>(j + 1));
    certified[static_cast<std::size_t>(j)] = box_certified_bound(static_cast<std::size_t>(j + 1));
  }

  Engine rng = make_engine(seed, 0);
  RejectionStats stats;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    ++stats.attempted;
    const Vector y = uniform_in_box(rng, box.halfwidths());
    const Vector proj = adapted.transpose() * y;
    bool accepted = true;
    for (Eigen::Index j = 0; j < m && accepted; ++j)
      accepted = std::abs(proj[j]) >= thresholds[static_cast<std::size_t>(j)];
    if (!accepted) continue;
    ++stats.accepted;

    if (!box.contains(y)) throw AlgorithmError("sample_box_separator: draw left the box");
    const double norm = y.norm();
    if (norm > kBoxNormCeiling) throw AlgorithmError("sample_box_separator: draw exceeds the norm ceiling");
    const Vector x = y / norm;
    std::vector<double> chain(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      chain[js] = thresholds[js] / std::max(norm, std::numeric_limits<double>::min());
      const double achieved = std::abs(x.dot(adapted.col(j)));
      if (achieved < certified[js] || achieved < chain[js] * (1.0 - 1e-12))
        throw AlgorithmError("sample_box_separator: certified bound violated at vector " + std::to_string(j + 1));
    }
    return {x, y, std::move(certified), std::move(chain), stats};
  }
  throw AlgorithmError("sample_box_separator: no acceptable draw in " + std::to_string(max_tries) + " tries");
}

// ---------------------------------------------------------------------------
// Constructions

namespace detail {

inline void require_dominance(const SeparationCertificate& measured, const SeparationCertificate& certified,
                              const char* who) {
  for (std::size_t j = 0; j < measured.deltas.size(); ++j)
    if (measured.deltas[j] < certified.deltas[j] - kDominanceTol)
      throw AlgorithmError(std::string(who) + ": measured transversality below certificate at index " +
                           std::to_string(j + 1));
}

}  // namespace detail

/// Common complement span(x) of J hyperplanes with certificate
/// delta_j = 3 sqrt(90) pi^-4 j^-5: adapt an orthonormal basis to the unit
/// normals, run the box sampler in those coordinates, and map back.
inline ComplementResult hyperplane_complement(const SubspaceFamily& family, std::uint64_t seed,
                                              int max_tries = kDefaultMaxTries) {
  detail::require(family.codim() == 1, "hyperplane_complement: family must have codimension 1");
  detail::require(static_cast<Eigen::Index>(family.size()) <= family.ambient_dim(),
                  "hyperplane_complement: truncation too small (J > n)");
  std::vector<Vector> normals;
  normals.reserve(family.size());
  for (const auto& v : family) normals.push_back(v.normals().col(0));

  const AdaptedBasis adapted = adapt_basis(normals, family.ambient_dim());
  BoxSeparator sep = sample_box_separator(adapted.coordinates, seed, max_tries);
  const Vector x = adapted.frame.matrix() * sep.x;

  ComplementResult result{SpanSubspace::from_vectors(Matrix(x)), {}, {}, seed, sep.stats};
  result.certificate.deltas = std::move(sep.certified);
  result.certificate.provenance = Provenance::certified_by_construction;
  result.certificate.constants = {{"box_constant", kBoxSeparatorConstant}, {"slab_scale", kBoxSlabScale}};
  result.certificate.decay_fit = fit_decay(result.certificate.deltas);
  result.measured = certify(result.complement, family);
  detail::require_dominance(result.measured, result.certificate, "hyperplane_complement");
  return result;
}

/// Common complement span(x) of finitely many hyperplanes (any J) from the
/// cube sampler, with the constant certificate delta_j = 1/(2 J n).
inline ComplementResult cube_complement(const SubspaceFamily& family, std::uint64_t seed,
                                        int max_tries = kDefaultMaxTries) {
  detail::require(family.codim() == 1, "cube_complement: family must have codimension 1");
  std::vector<Vector> normals;
  normals.reserve(family.size());
  for (const auto& v : family) normals.push_back(v.normals().col(0));
  const CubeSeparator sep = sample_cube_separator(normals, seed, max_tries);

  ComplementResult result{SpanSubspace::from_vectors(Matrix(sep.x)), {}, {}, seed, sep.stats};
  result.certificate.deltas.assign(family.size(), sep.certified_bound);
  result.certificate.provenance = Provenance::certified_by_construction;
  result.certificate.constants = {{"cube_bound", sep.certified_bound}};
  result.certificate.decay_fit = fit_decay(result.certificate.deltas);
  result.measured = certify(result.complement, family);
  detail::require_dominance(result.measured, result.certificate, "cube_complement");
  return result;
}

/// Distance from the origin to the line through x1 and x2, i.e.
/// inf_t |t x1 + (1 - t) x2|.
inline double line_min_norm(const Vector& x1, const Vector& x2) {
  detail::require(x1.size() == x2.size(), "line_min_norm: dimension mismatch");
  detail::require(x1.squaredNorm() > 0.0 || x2.squaredNorm() > 0.0, "line_min_norm: both points are zero");
  const Vector direction = x1 - x2;
  const double dd = direction.squaredNorm();
  if (dd == 0.0) return x1.norm();
  const double t = -x2.dot(direction) / dd;
  return (x2 + t * direction).norm();
}

/// Superspace V1 of V with codimension one less: drop the last normal.
inline CodimSubspace extend_superspace(const CodimSubspace& v) {
  detail::require(v.codim() >= 2, "extend_superspace: codimension must be at least 2");
  return CodimSubspace(OrthonormalFrame(v.normals().leftCols(v.codim() - 1)));
}

/// Hyperplane V + C1, for C1 of dimension codim(V) - 1 with C1 and V
/// independent. Its normal is the unit vector of V^perp orthogonal to the
/// projection of C1.
inline CodimSubspace sum_hyperplane(const CodimSubspace& v, const SpanSubspace& c1) {
  detail::require(c1.ambient_dim() == v.ambient_dim(), "sum_hyperplane: dimension mismatch");
  detail::require(c1.dim() + 1 == v.codim(), "sum_hyperplane: dim(C1) must be codim(V) - 1");
  const Matrix coupling = v.normals().transpose() * c1.basis();  // k x (k-1)
  Eigen::JacobiSVD<Matrix> svd(coupling, Eigen::ComputeFullU);
  if (svd.singularValues().minCoeff() <= kZeroTransversality)
    throw AlgorithmError("sum_hyperplane: V and C1 are not independent at working precision");
  const Vector w = svd.matrixU().col(v.codim() - 1);
  Vector normal = v.normals() * w;
  normal /= normal.norm();
  return CodimSubspace(OrthonormalFrame(Matrix(normal)));
}

namespace detail {

inline ComplementResult common_complement_step(const SubspaceFamily& family, std::uint64_t seed, int max_tries) {
  if (family.codim() == 1) return hyperplane_complement(family, seed, max_tries);

  std::vector<CodimSubspace> supers;
  supers.reserve(family.size());
  for (const auto& v : family) supers.push_back(extend_superspace(v));
  const ComplementResult first =
      common_complement_step(SubspaceFamily(std::move(supers)), derive_seed(seed, 1), max_tries);

  std::vector<CodimSubspace> sums;
  sums.reserve(family.size());
  for (const auto& v : family) sums.push_back(sum_hyperplane(v, first.complement));
  const ComplementResult second =
      hyperplane_complement(SubspaceFamily(std::move(sums)), derive_seed(seed, 2), max_tries);

  Matrix spanning(family.ambient_dim(), family.codim());
  spanning.leftCols(family.codim() - 1) = first.complement.basis();
  spanning.rightCols(1) = second.complement.basis();

  ComplementResult result{SpanSubspace::from_vectors(spanning), {}, {}, seed, first.rejection_stats};
  result.rejection_stats += second.rejection_stats;
  auto& cert = result.certificate;
  cert.provenance = Provenance::certified_by_construction;
  cert.deltas.resize(family.size());
  for (std::size_t j = 0; j < family.size(); ++j)
    cert.deltas[j] = kLineConstant * first.certificate.deltas[j] * second.certificate.deltas[j];
  cert.constants = {{"box_constant", kBoxSeparatorConstant},
                    {"line_constant", kLineConstant},
                    {"codim", static_cast<double>(family.codim())}};
  cert.decay_fit = fit_decay(cert.deltas);
  result.measured = certify(result.complement, family);
  require_dominance(result.measured, cert, "common_complement");
  return result;
}

}  // namespace detail

/// Certified common complement for a codimension-k family. For k > 1,
/// complement the superspaces V_j^1 (last normal dropped) by C1, complement
/// the hyperplanes V_j + C1 by a line C2, and return C1 + C2 with
/// delta_j = delta_j^1 delta_j^2 / sqrt(5).
inline ComplementResult common_complement(const SubspaceFamily& family, std::uint64_t seed,
                                          int max_tries = kDefaultMaxTries) {
  detail::require(static_cast<Eigen::Index>(family.size()) <= family.ambient_dim() - family.codim(),
                  "common_complement: need J <= n - k");
  return detail::common_complement_step(family, seed, max_tries);
}

// ---------------------------------------------------------------------------
// Finite truncation of l2 normal sequences

struct TruncatedFamily {
  SubspaceFamily family;
  Eigen::Index dimension;
  std::vector<double> tail_norms;  // relative l2 mass dropped from each normal
};

/// Keeps the first `dimension` coordinates of each sequence and renormalizes.
inline TruncatedFamily truncate_sequences(std::span<const Vector> sequences, Eigen::Index dimension) {
  detail::require(!sequences.empty(), "truncate_sequences: no sequences");
  detail::require(dimension >= 2, "truncate_sequences: dimension must be at least 2");
  std::vector<CodimSubspace> members;
  std::vector<double> tails;
  for (std::size_t j = 0; j < sequences.size(); ++j) {
    const Vector& s = sequences[j];
    detail::require(s.size() >= dimension, "truncate_sequences: sequence shorter than truncation");
    const double total = s.norm();
    const Vector head = s.head(dimension);
    detail::require(total > 0.0 && head.norm() > 0.0,
                    "truncate_sequences: sequence " + std::to_string(j + 1) + " has no mass in the truncation");
    tails.push_back(s.tail(s.size() - dimension).norm() / total);
    members.emplace_back(OrthonormalFrame(Matrix(head / head.norm())));
  }
  return {SubspaceFamily(std::move(members)), dimension, std::move(tails)};
}

/// Smallest truncation whose per-normal relative tail norm is at most
/// tail_tol (at least 2 and at least J, so the hyperplane construction has
/// room).
inline TruncatedFamily truncate_sequences(std::span<const Vector> sequences, double tail_tol = 1e-8) {
  detail::require(!sequences.empty(), "truncate_sequences: no sequences");
  Eigen::Index longest = 0;
  for (const auto& s : sequences) longest = std::max(longest, s.size());
  Eigen::Index needed = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(sequences.size()));
  for (const auto& s : sequences) {
    const double total = s.norm();
    double tail_sq = 0.0;
    Eigen::Index cut = s.size();
    // walk back from the end while the dropped mass stays within tolerance
    while (cut > 1) {
      const double next = tail_sq + s[cut - 1] * s[cut - 1];
      if (std::sqrt(next) > tail_tol * total) break;
      tail_sq = next;
      --cut;
    }
    needed = std::max(needed, cut);
  }
  detail::require(needed <= longest, "truncate_sequences: sequences too short for the requested tail");
  return truncate_sequences(sequences, needed);
}

}  // namespace transversal
