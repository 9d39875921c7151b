#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transversal/error.hpp"

namespace transversal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultOrthoTol = 1e-10;

/// Ordered orthonormal vectors of R^n, stored as the columns of an n x m
/// matrix. The constructor validates orthonormality; use orthonormalize()
/// to build one from arbitrary vectors.
class OrthonormalFrame {
 public:
  OrthonormalFrame(Matrix columns, double ortho_tol = kDefaultOrthoTol)
      : columns_(std::move(columns)), ortho_tol_(ortho_tol) {
    detail::require(ortho_tol_ > 0.0, "OrthonormalFrame: ortho_tol must be positive");
    detail::require(columns_.rows() >= 1, "OrthonormalFrame: ambient dimension must be positive");
    detail::require(columns_.cols() <= columns_.rows(),
                    "OrthonormalFrame: more vectors than ambient dimension");
    if (columns_.cols() > 0) {
      const Matrix gram = columns_.transpose() * columns_;
      const double deviation =
          (gram - Matrix::Identity(columns_.cols(), columns_.cols())).cwiseAbs().maxCoeff();
      detail::require(deviation <= ortho_tol_,
                      "OrthonormalFrame: vectors are not orthonormal (deviation " +
                          std::to_string(deviation) + ")");
    }
  }

  Eigen::Index ambient_dim() const { return columns_.rows(); }
  Eigen::Index size() const { return columns_.cols(); }
  double ortho_tol() const { return ortho_tol_; }
  const Matrix& matrix() const { return columns_; }
  Vector vector(Eigen::Index i) const { return columns_.col(i); }

  friend bool operator==(const OrthonormalFrame& a, const OrthonormalFrame& b) {
    return a.columns_.rows() == b.columns_.rows() && a.columns_.cols() == b.columns_.cols() &&
           a.columns_ == b.columns_;
  }

 private:
  Matrix columns_;
  double ortho_tol_;
};

namespace detail {

inline Eigen::Index common_dimension(std::span<const Vector> vectors, const char* who) {
  require(!vectors.empty(), std::string(who) + ": empty input");
  const Eigen::Index n = vectors.front().size();
  require(n >= 1, std::string(who) + ": zero-dimensional vector");
  for (const auto& v : vectors)
    require(v.size() == n, std::string(who) + ": dimension mismatch");
  return n;
}

inline Matrix as_columns(std::span<const Vector> vectors, Eigen::Index n) {
  Matrix m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  return m;
}

}  // namespace detail

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual falls below tol times the largest input norm are dropped, so the
/// result has the numerical rank of the input. Input that is already
/// orthonormal to working precision is returned unchanged (bit for bit).
inline OrthonormalFrame orthonormalize(const Matrix& columns, double tol = kDefaultRankTol) {
  detail::require(tol > 0.0, "orthonormalize: tol must be positive");
  detail::require(columns.cols() >= 1, "orthonormalize: empty input");
  detail::require(columns.rows() >= 1, "orthonormalize: zero-dimensional vectors");
  const Eigen::Index n = columns.rows();
  const Eigen::Index m = columns.cols();

  if (m <= n) {
    const Matrix gram = columns.transpose() * columns;
    const double eps = std::numeric_limits<double>::epsilon();
    if ((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 4.0 * eps * static_cast<double>(n))
      return OrthonormalFrame(columns);
  }

  double max_norm = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) max_norm = std::max(max_norm, columns.col(j).norm());

  std::vector<Vector> kept;
  if (max_norm > 0.0) {
    for (Eigen::Index j = 0; j < m && static_cast<Eigen::Index>(kept.size()) < n; ++j) {
      Vector w = columns.col(j);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : kept) w -= q.dot(w) * q;
      const double r = w.norm();
      if (r > tol * max_norm) kept.push_back(w / r);
    }
  }
  Matrix q(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = kept[j];
  return OrthonormalFrame(std::move(q));
}

inline OrthonormalFrame orthonormalize(std::span<const Vector> vectors, double tol = kDefaultRankTol) {
  const Eigen::Index n = detail::common_dimension(vectors, "orthonormalize");
  return orthonormalize(detail::as_columns(vectors, n), tol);
}

/// Closed subspace V of codimension k in R^n, represented by an orthonormal
/// basis of its orthogonal complement (the normal frame).
class CodimSubspace {
 public:
  explicit CodimSubspace(OrthonormalFrame normals) : normals_(std::move(normals)) {
    detail::require(normals_.size() >= 1 && normals_.size() < normals_.ambient_dim(),
                    "CodimSubspace: need 1 <= codim < ambient dimension");
  }

  /// Orthonormalizes the given normals; fails unless they have full rank.
  static CodimSubspace from_normals(std::span<const Vector> normals, double tol = kDefaultRankTol) {
    OrthonormalFrame frame = orthonormalize(normals, tol);
    detail::require(frame.size() == static_cast<Eigen::Index>(normals.size()),
                    "CodimSubspace: normals are rank deficient (rank " + std::to_string(frame.size()) +
                        " < " + std::to_string(normals.size()) + ")");
    return CodimSubspace(std::move(frame));
  }

  static CodimSubspace from_normals(const Matrix& normal_columns, double tol = kDefaultRankTol) {
    OrthonormalFrame frame = orthonormalize(normal_columns, tol);
    detail::require(frame.size() == normal_columns.cols(),
                    "CodimSubspace: normals are rank deficient (rank " + std::to_string(frame.size()) +
                        " < " + std::to_string(normal_columns.cols()) + ")");
    return CodimSubspace(std::move(frame));
  }

  Eigen::Index ambient_dim() const { return normals_.ambient_dim(); }
  Eigen::Index codim() const { return normals_.size(); }
  const OrthonormalFrame& normal_frame() const { return normals_; }
  const Matrix& normals() const { return normals_.matrix(); }

  /// Coordinates of x in the normal frame; their norm is d(x, V).
  Vector normal_coordinates(const Vector& x) const {
    detail::require(x.size() == ambient_dim(), "CodimSubspace: dimension mismatch");
    return normals().transpose() * x;
  }

  /// Orthogonal projection of x onto V.
  Vector project(const Vector& x) const { return x - normals() * normal_coordinates(x); }

  bool contains(const Vector& x, double tol = kDefaultOrthoTol) const {
    return normal_coordinates(x).norm() <= tol * std::max(1.0, x.norm());
  }

  /// Orthonormal basis of V itself (n x (n-k)), completed from the normals.
  Matrix basis() const {
    Eigen::HouseholderQR<Matrix> qr(normals());
    const Matrix q = qr.householderQ() * Matrix::Identity(ambient_dim(), ambient_dim());
    return q.rightCols(ambient_dim() - codim());
  }

  friend bool operator==(const CodimSubspace& a, const CodimSubspace& b) {
    return a.normals_ == b.normals_;
  }

 private:
  OrthonormalFrame normals_;
};

/// k-dimensional subspace C of R^n with an orthonormal basis.
class SpanSubspace {
 public:
  explicit SpanSubspace(OrthonormalFrame basis) : basis_(std::move(basis)) {
    detail::require(basis_.size() >= 1, "SpanSubspace: dimension must be positive");
  }

  static SpanSubspace from_vectors(std::span<const Vector> vectors, double tol = kDefaultRankTol) {
    OrthonormalFrame frame = orthonormalize(vectors, tol);
    detail::require(frame.size() == static_cast<Eigen::Index>(vectors.size()),
                    "SpanSubspace: spanning vectors are linearly dependent");
    return SpanSubspace(std::move(frame));
  }

  static SpanSubspace from_vectors(const Matrix& columns, double tol = kDefaultRankTol) {
    OrthonormalFrame frame = orthonormalize(columns, tol);
    detail::require(frame.size() == columns.cols(),
                    "SpanSubspace: spanning vectors are linearly dependent");
    return SpanSubspace(std::move(frame));
  }

  Eigen::Index ambient_dim() const { return basis_.ambient_dim(); }
  Eigen::Index dim() const { return basis_.size(); }
  const OrthonormalFrame& basis_frame() const { return basis_; }
  const Matrix& basis() const { return basis_.matrix(); }

  friend bool operator==(const SpanSubspace& a, const SpanSubspace& b) { return a.basis_ == b.basis_; }

 private:
  OrthonormalFrame basis_;
};

/// Euclidean distance from x to V, equal to the quotient norm of x in R^n/V.
inline double distance_to_subspace(const Vector& x, const CodimSubspace& v) {
  return v.normal_coordinates(x).norm();
}

inline double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

/// inf over unit x in C of d(x, V), computed as the smallest singular value
/// of N^T B (normal frame of V against the basis of C). Zero exactly when C
/// fails to complement V, one exactly when C is the orthogonal complement.
inline double degree_of_transversality(const SpanSubspace& c, const CodimSubspace& v) {
  detail::require(c.ambient_dim() == v.ambient_dim(), "degree_of_transversality: dimension mismatch");
  detail::require(c.dim() == v.codim(), "degree_of_transversality: dim(C) must equal codim(V)");
  const Matrix coupling = v.normals().transpose() * c.basis();
  return std::clamp(smallest_singular_value(coupling), 0.0, 1.0);
}

}  // namespace transversal
