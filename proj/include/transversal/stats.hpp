#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "transversal/error.hpp"

namespace transversal {

/// Neumaier-compensated accumulator. Reductions over Monte Carlo samples go
/// through it so the total does not depend on summation order beyond
/// rounding of the compensation term.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      compensation_ += (sum_ - t) + value;
    else
      compensation_ += (value - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares y = slope * x + intercept with equal weights.
/// A single point yields slope 0 and intercept y.
inline LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "least_squares_line: size mismatch");
  detail::require(!x.empty(), "least_squares_line: no points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  if (sxx == 0.0) {
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

/// Weighted polynomial least squares with known per-point standard errors.
/// Returns coefficients c_0..c_degree of sum c_i x^i and their standard
/// errors obtained by propagating the point errors through the linear
/// estimator.
struct PolynomialFit {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
};

inline PolynomialFit weighted_polynomial_fit(std::span<const double> x, std::span<const double> y,
                                             std::span<const double> stderrs, int degree) {
  detail::require(x.size() == y.size() && x.size() == stderrs.size(),
                  "weighted_polynomial_fit: size mismatch");
  detail::require(degree >= 0 && x.size() >= static_cast<std::size_t>(degree) + 1,
                  "weighted_polynomial_fit: not enough points for degree");
  const auto m = static_cast<Eigen::Index>(x.size());
  const Eigen::Index p = degree + 1;
  Eigen::MatrixXd design(m, p);
  Eigen::VectorXd rhs(m);
  Eigen::VectorXd sigma(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // floor keeps zero-variance points (exact estimates) finite-weighted
    const double s = std::max(stderrs[static_cast<std::size_t>(i)], 1e-300);
    sigma[i] = s;
    double power = 1.0;
    for (Eigen::Index c = 0; c < p; ++c) {
      design(i, c) = power / s;
      power *= x[static_cast<std::size_t>(i)];
    }
    rhs[i] = y[static_cast<std::size_t>(i)] / s;
  }
  // coefficients = pinv(design) * rhs; each row of pinv(design) scaled by
  // 1/sigma maps the raw y to a coefficient, so its norm is the stderr.
  const Eigen::MatrixXd pinv = design.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::VectorXd coef = pinv * rhs;
  PolynomialFit fit;
  for (Eigen::Index c = 0; c < p; ++c) {
    fit.coefficients.push_back(coef[c]);
    // d coef / d y_i = pinv(c,i) / sigma_i, var = sum (pinv(c,i)/sigma_i)^2 sigma_i^2
    fit.standard_errors.push_back(pinv.row(c).norm());
  }
  return fit;
}

inline double binomial_stderr(double fraction, std::size_t samples) {
  if (samples == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(fraction * (1.0 - fraction), 0.0) / static_cast<double>(samples));
}

/// Volume of the unit ball in R^dim (dim = 0 gives 1).
inline double unit_ball_volume(int dim) {
  return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

}  // namespace transversal
