#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transversal/error.hpp"
#include "transversal/geometry.hpp"
#include "transversal/random.hpp"
#include "transversal/separator.hpp"
#include "transversal/stats.hpp"

namespace transversal {

struct McConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::vector<double> epsilon_grid;  // strictly decreasing; also used as the eta grid
  std::size_t horizon = 0;           // members / matrices used, 0 = all
  double radius = 1.0;               // coefficient ball radius (translation experiment)

  void validate() const {
    detail::require(samples >= 1000, "McConfig: need at least 1000 samples");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
      detail::require(epsilon_grid[i] > 0.0, "McConfig: grid values must be positive");
      if (i > 0) detail::require(epsilon_grid[i] < epsilon_grid[i - 1], "McConfig: grid must be strictly decreasing");
    }
    detail::require(radius > 0.0, "McConfig: radius must be positive");
  }
};

enum class BoundKind {
  upper,  // pass iff estimate <= bound + 3 stderr
  lower,  // pass iff estimate >= bound (an "almost all" frequency target)
};

struct McReport {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> analytic_bound;
  BoundKind bound_kind = BoundKind::upper;
  bool pass = true;
  bool bound_vacuous = false;
  McConfig config;
  std::map<std::string, double> details;

  void settle_verdict() {
    if (!analytic_bound) {
      pass = true;
      return;
    }
    pass = bound_kind == BoundKind::upper ? estimate <= *analytic_bound + 3.0 * standard_error
                                          : estimate >= *analytic_bound;
  }
};

inline constexpr double kAlmostAllFrequency = 0.99;

namespace detail {

inline std::size_t horizon_of(const McConfig& config, std::size_t available) {
  if (config.horizon == 0) return available;
  require(config.horizon <= available, "McConfig: horizon exceeds the number of members");
  return config.horizon;
}

inline Matrix sample_ball_columns(Engine& rng, Eigen::Index rows, Eigen::Index cols, double radius) {
  Matrix a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) a.col(c) = uniform_in_ball(rng, rows, radius);
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bad set of the finite-dimensional prevalence bound

/// Estimates mu{x in B(0,1) : exists j <= J, d(x, V_j) <= eps j^-2} for a
/// hyperplane family and compares it with eps (pi^2/3) vol_{n-1}(B^{n-1}).
/// details: "truncated_bound" uses sum_{j<=J} j^-2 instead of pi^2/6,
/// "ball_volume" is vol_n(B^n).
inline McReport mc_bad_set_measure(const SubspaceFamily& family, double epsilon, const McConfig& config) {
  config.validate();
  detail::require(family.codim() == 1, "mc_bad_set_measure: family must consist of hyperplanes");
  detail::require(family.ambient_dim() >= 2, "mc_bad_set_measure: need n >= 2");
  detail::require(epsilon > 0.0, "mc_bad_set_measure: epsilon must be positive");
  const std::size_t members = detail::horizon_of(config, family.size());
  const Eigen::Index n = family.ambient_dim();

  Matrix normals(n, static_cast<Eigen::Index>(members));
  std::vector<double> widths(members);
  double partial = 0.0;
  for (std::size_t j = 0; j < members; ++j) {
    normals.col(static_cast<Eigen::Index>(j)) = family[j].normals().col(0);
    const double jj = static_cast<double>(j + 1);
    widths[j] = epsilon / (jj * jj);
    partial += 1.0 / (jj * jj);
  }

  std::size_t hits = 0;
  for (std::size_t s = 0; s < config.samples; ++s) {
    Engine rng = make_engine(config.seed, s);
    const Vector x = uniform_in_ball(rng, n);
    const Vector proj = normals.transpose() * x;
    for (std::size_t j = 0; j < members; ++j) {
      if (std::abs(proj[static_cast<Eigen::Index>(j)]) <= widths[j]) {
        ++hits;
        break;
      }
    }
  }
  const double ball = unit_ball_volume(static_cast<int>(n));
  const double section = unit_ball_volume(static_cast<int>(n) - 1);
  const double fraction = static_cast<double>(hits) / static_cast<double>(config.samples);

  McReport report;
  report.estimate = ball * fraction;
  report.standard_error = ball * binomial_stderr(fraction, config.samples);
  report.analytic_bound = epsilon * (M_PI * M_PI / 3.0) * section;
  report.bound_vacuous = *report.analytic_bound >= ball;
  report.config = config;
  report.details = {{"epsilon", epsilon},
                    {"dimension", static_cast<double>(n)},
                    {"members", static_cast<double>(members)},
                    {"truncated_bound", 2.0 * epsilon * partial * section},
                    {"ball_volume", ball},
                    {"hits", static_cast<double>(hits)}};
  report.settle_verdict();
  return report;
}

struct BadSetSweep {
  std::vector<McReport> reports;  // one per grid value, same order as the grid
  PolynomialFit linear;           // c0 + c1 eps, weighted by 1/stderr^2
  PolynomialFit curved;           // c0 + c1 eps + c2 eps^2 (needs >= 3 grid points)
  bool vanishes_at_zero = false;  // |c0| <= 3 se(c0) for the curved fit
  bool all_pass = false;
};

/// Runs mc_bad_set_measure over the epsilon grid with independent streams
/// and fits the dependence on epsilon. The union of slabs loses measure to
/// pairwise overlaps at order eps^2, so the intercept test uses the fit with
/// a quadratic term.
inline BadSetSweep mc_bad_set_sweep(const SubspaceFamily& family, const McConfig& config) {
  config.validate();
  detail::require(config.epsilon_grid.size() >= 3, "mc_bad_set_sweep: need at least 3 epsilon values");
  BadSetSweep sweep;
  std::vector<double> y, se;
  for (std::size_t i = 0; i < config.epsilon_grid.size(); ++i) {
    McConfig local = config;
    local.seed = derive_seed(config.seed, i);
    sweep.reports.push_back(mc_bad_set_measure(family, config.epsilon_grid[i], local));
    y.push_back(sweep.reports.back().estimate);
    // a zero-hit point still carries the resolution of one hit
    const double floor = sweep.reports.back().details.at("ball_volume") / static_cast<double>(config.samples);
    se.push_back(std::max(sweep.reports.back().standard_error, floor));
  }
  sweep.linear = weighted_polynomial_fit(config.epsilon_grid, y, se, 1);
  sweep.curved = weighted_polynomial_fit(config.epsilon_grid, y, se, 2);
  sweep.vanishes_at_zero = std::abs(sweep.curved.coefficients[0]) <= 3.0 * sweep.curved.standard_errors[0];
  sweep.all_pass = std::all_of(sweep.reports.begin(), sweep.reports.end(), [](const McReport& r) { return r.pass; });
  return sweep;
}

// ---------------------------------------------------------------------------
// Determinant lower bound

inline double abs_det(const Matrix& m) { return std::abs(m.fullPivLu().determinant()); }

struct DetSlabFit {
  std::vector<double> etas;
  std::vector<McReport> reports;  // mu{A in B(0,1)^k : |det(A + shift)| <= eta} per eta
  double coefficient = 0.0;       // fitted c-hat (slope in eta)
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Samples A with columns uniform in the unit ball of R^k and estimates the
/// measure of {|det(A + shift)| <= eta} for every eta of the grid (common
/// samples), then fits measure = c-hat eta + b.
inline DetSlabFit mc_det_slab(const Matrix& shift, const McConfig& config) {
  config.validate();
  detail::require(shift.rows() == shift.cols() && shift.rows() >= 1, "mc_det_slab: shift must be square");
  detail::require(config.epsilon_grid.size() >= 2, "mc_det_slab: need at least 2 eta values");
  const Eigen::Index k = shift.rows();
  const auto& etas = config.epsilon_grid;
  std::vector<std::size_t> hits(etas.size(), 0);
  for (std::size_t s = 0; s < config.samples; ++s) {
    Engine rng = make_engine(config.seed, s);
    const double d = abs_det(detail::sample_ball_columns(rng, k, k, 1.0) + shift);
    for (std::size_t i = 0; i < etas.size(); ++i)
      if (d <= etas[i]) ++hits[i];
  }
  const double space = std::pow(unit_ball_volume(static_cast<int>(k)), static_cast<double>(k));
  DetSlabFit fit;
  fit.etas = etas;
  std::vector<double> y;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double fraction = static_cast<double>(hits[i]) / static_cast<double>(config.samples);
    McReport r;
    r.estimate = space * fraction;
    r.standard_error = space * binomial_stderr(fraction, config.samples);
    r.config = config;
    r.details = {{"eta", etas[i]}, {"hits", static_cast<double>(hits[i])}};
    fit.reports.push_back(r);
    y.push_back(r.estimate);
  }
  const LinearFit line = least_squares_line(etas, y);
  fit.coefficient = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

struct DetReport {
  DetSlabFit slab;
  McReport positive;            // fraction of samples with eps-hat > 0 (target 0.99)
  double fraction_above = 0.0;  // fraction with eps-hat >= threshold
  double threshold = 1e-6;
  std::vector<double> epsilon_hat;  // per sample
};

/// eps-hat(A) = min_j j^2 |det(A + A_j)|.
inline double det_epsilon_hat(const Matrix& a, std::span<const Matrix> shifts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const double jj = static_cast<double>(j + 1);
    best = std::min(best, jj * jj * abs_det(a + shifts[j]));
  }
  return best;
}

/// Monte Carlo check of the generic determinant lower bound: the slab fit
/// for `slab_shift`, and the distribution of eps-hat over sampled A for the
/// sequence `shifts`.
inline DetReport mc_det_lower_bound(std::span<const Matrix> shifts, const Matrix& slab_shift, const McConfig& config,
                                    double threshold = 1e-6) {
  config.validate();
  detail::require(!shifts.empty(), "mc_det_lower_bound: no matrices");
  const Eigen::Index k = shifts.front().rows();
  for (const auto& m : shifts)
    detail::require(m.rows() == k && m.cols() == k, "mc_det_lower_bound: matrices must share a square size");
  detail::require(slab_shift.rows() == k && slab_shift.cols() == k, "mc_det_lower_bound: slab shift size mismatch");
  const std::size_t members = detail::horizon_of(config, shifts.size());
  const auto used = shifts.first(members);

  DetReport report;
  report.threshold = threshold;
  if (config.epsilon_grid.size() >= 2) {
    McConfig slab_config = config;
    slab_config.seed = derive_seed(config.seed, 1);
    report.slab = mc_det_slab(slab_shift, slab_config);
  }
  std::size_t positive = 0, above = 0;
  report.epsilon_hat.reserve(config.samples);
  const std::uint64_t stream = derive_seed(config.seed, 2);
  for (std::size_t s = 0; s < config.samples; ++s) {
    Engine rng = make_engine(stream, s);
    const double e = det_epsilon_hat(detail::sample_ball_columns(rng, k, k, 1.0), used);
    report.epsilon_hat.push_back(e);
    if (e > 0.0) ++positive;
    if (e >= threshold) ++above;
  }
  const double n = static_cast<double>(config.samples);
  report.positive.estimate = static_cast<double>(positive) / n;
  report.positive.standard_error = binomial_stderr(report.positive.estimate, config.samples);
  report.positive.analytic_bound = kAlmostAllFrequency;
  report.positive.bound_kind = BoundKind::lower;
  report.positive.config = config;
  report.fraction_above = static_cast<double>(above) / n;
  report.positive.details = {{"fraction_above_threshold", report.fraction_above},
                             {"threshold", threshold},
                             {"members", static_cast<double>(members)}};
  if (!report.slab.etas.empty()) {
    report.positive.details["slab_coefficient"] = report.slab.coefficient;
    report.positive.details["slab_r_squared"] = report.slab.r_squared;
  }
  report.positive.settle_verdict();
  return report;
}

// ---------------------------------------------------------------------------
// Inverse-norm lower bound

struct InverseBoundCheck {
  std::vector<double> smallest_singular;  // s_j = sigma_min(A + A_j)
  std::vector<double> inverse_norm;       // |(A + A_j)^-1|_2, NaN when not invertible
  std::vector<double> identity_error;     // |s_j |inv_j| - 1|, NaN when not invertible
  double epsilon_hat = 0.0;               // min_j s_j j^2 delta_j^-(k-1)
};

/// Per-index s_j and the extracted eps-hat. The inverse norm is computed
/// from an LU inverse, independently of the SVD that yields s_j.
inline InverseBoundCheck inverse_bound_check(const Matrix& a, std::span<const Matrix> shifts,
                                             std::span<const double> deltas) {
  detail::require(a.rows() == a.cols() && a.rows() >= 1, "inverse_bound_check: A must be square");
  detail::require(shifts.size() == deltas.size() && !shifts.empty(), "inverse_bound_check: size mismatch");
  const Eigen::Index k = a.rows();
  InverseBoundCheck out;
  out.epsilon_hat = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const Matrix& aj = shifts[j];
    detail::require(aj.rows() == k && aj.cols() == k, "inverse_bound_check: matrices must match A");
    detail::require(deltas[j] > 0.0 && deltas[j] <= 1.0, "inverse_bound_check: delta_j must lie in (0, 1]");
    Eigen::JacobiSVD<Matrix> shift_svd(aj);
    const double shift_norm = shift_svd.singularValues().size() ? shift_svd.singularValues()[0] : 0.0;
    detail::require(shift_norm <= (1.0 + 1e-12) / deltas[j],
                    "inverse_bound_check: |A_j| exceeds 1/delta_j at index " + std::to_string(j + 1));

    const Matrix sum = a + aj;
    Eigen::JacobiSVD<Matrix> svd(sum);
    const double s = svd.singularValues().minCoeff();
    out.smallest_singular.push_back(s);

    const Eigen::FullPivLU<Matrix> lu(sum);
    if (lu.isInvertible()) {
      const Matrix inv = lu.inverse();
      Eigen::JacobiSVD<Matrix> inv_svd(inv);
      const double inv_norm = inv_svd.singularValues()[0];
      out.inverse_norm.push_back(inv_norm);
      out.identity_error.push_back(std::abs(s * inv_norm - 1.0));
    } else {
      out.inverse_norm.push_back(std::numeric_limits<double>::quiet_NaN());
      out.identity_error.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    const double jj = static_cast<double>(j + 1);
    out.epsilon_hat =
        std::min(out.epsilon_hat, s * jj * jj * std::pow(deltas[j], -static_cast<double>(k - 1)));
  }
  return out;
}

struct InverseReport {
  McReport positive;  // fraction of samples with eps-hat > 0 (target 0.99)
  double max_identity_error = 0.0;
  std::size_t invertible = 0;
  std::size_t checked = 0;
};

inline InverseReport mc_inverse_bound(std::span<const Matrix> shifts, std::span<const double> deltas,
                                      const McConfig& config) {
  config.validate();
  detail::require(!shifts.empty(), "mc_inverse_bound: no matrices");
  const std::size_t members = detail::horizon_of(config, shifts.size());
  const Eigen::Index k = shifts.front().rows();
  InverseReport report;
  std::size_t positive = 0;
  for (std::size_t s = 0; s < config.samples; ++s) {
    Engine rng = make_engine(config.seed, s);
    const Matrix a = detail::sample_ball_columns(rng, k, k, 1.0);
    const InverseBoundCheck check = inverse_bound_check(a, shifts.first(members), deltas.first(members));
    if (check.epsilon_hat > 0.0) ++positive;
    for (double e : check.identity_error) {
      ++report.checked;
      if (std::isnan(e)) continue;
      ++report.invertible;
      report.max_identity_error = std::max(report.max_identity_error, e);
    }
  }
  auto& r = report.positive;
  r.estimate = static_cast<double>(positive) / static_cast<double>(config.samples);
  r.standard_error = binomial_stderr(r.estimate, config.samples);
  r.analytic_bound = kAlmostAllFrequency;
  r.bound_kind = BoundKind::lower;
  r.config = config;
  r.details = {{"max_identity_error", report.max_identity_error},
               {"invertible", static_cast<double>(report.invertible)},
               {"checked", static_cast<double>(report.checked)},
               {"members", static_cast<double>(members)}};
  r.settle_verdict();
  return report;
}

// ---------------------------------------------------------------------------
// Translation genericity

/// Columns c_i + x_i with c_i = sum_l A(l, i) b_l, where b_l is the basis of
/// the base complement.
inline Matrix translated_spanning_set(const SpanSubspace& base, const Matrix& coefficients,
                                      std::span<const Vector> translation) {
  const Eigen::Index k = base.dim();
  detail::require(coefficients.rows() == k && coefficients.cols() == k,
                  "translated_spanning_set: coefficient matrix must be k x k");
  detail::require(static_cast<Eigen::Index>(translation.size()) == k,
                  "translated_spanning_set: need k translation vectors");
  Matrix m = base.basis() * coefficients;
  for (Eigen::Index i = 0; i < k; ++i) {
    detail::require(translation[static_cast<std::size_t>(i)].size() == base.ambient_dim(),
                    "translated_spanning_set: translation dimension mismatch");
    m.col(i) += translation[static_cast<std::size_t>(i)];
  }
  return m;
}

struct TranslationReport {
  McReport passing;                     // fraction of sampled A giving a well-separating complement
  std::vector<double> exponents;        // fitted decay exponent per passing sample
  double pooled_exponent = 0.0;         // log-log fit over all passing profiles
  double max_exponent = 0.0;            // threshold handed to is_well_separating
  std::vector<std::vector<double>> measured;  // per-sample measured profile (empty if degenerate)
};

/// Samples coefficient matrices A (columns uniform in a ball of
/// config.radius), forms span(c_1 + x_1, ..., c_k + x_k) and certifies it
/// against the family. With fewer than 3 members a sample passes when it is
/// a common complement.
inline TranslationReport translation_experiment(const ComplementResult& base, const SubspaceFamily& family,
                                                std::span<const Vector> translation, const McConfig& config,
                                                std::optional<double> max_exponent = std::nullopt) {
  config.validate();
  const Eigen::Index k = family.codim();
  detail::require(base.complement.dim() == k && base.complement.ambient_dim() == family.ambient_dim(),
                  "translation_experiment: base complement does not match the family");
  detail::require(base.certificate.deltas.size() == family.size(),
                  "translation_experiment: base certificate does not match the family");
  for (double d : base.certificate.deltas)
    detail::require(d > 0.0, "translation_experiment: base is not a certified common complement");
  detail::require(base.measured.is_common_complement(), "translation_experiment: base is not a common complement");

  TranslationReport report;
  report.max_exponent = max_exponent.value_or(5.0 * static_cast<double>(k * k) + 2.0);
  std::vector<double> pooled_x, pooled_y;
  std::size_t passing = 0;
  for (std::size_t s = 0; s < config.samples; ++s) {
    Engine rng = make_engine(config.seed, s);
    const Matrix a = detail::sample_ball_columns(rng, k, k, config.radius);
    const Matrix spanning = translated_spanning_set(base.complement, a, translation);
    const OrthonormalFrame frame = orthonormalize(spanning);
    if (frame.size() != k) {
      report.measured.emplace_back();
      continue;
    }
    const SeparationCertificate cert = certify(SpanSubspace(frame), family);
    report.measured.push_back(cert.deltas);
    if (!cert.is_common_complement()) continue;
    bool ok = true;
    if (family.size() >= 3) {
      const WellSeparation w = assess_well_separation(cert.deltas, report.max_exponent);
      ok = w.well_separating;
      if (ok) report.exponents.push_back(w.exponent);
    }
    if (!ok) continue;
    ++passing;
    for (std::size_t j = 0; j < cert.deltas.size(); ++j) {
      pooled_x.push_back(std::log(static_cast<double>(j + 1)));
      pooled_y.push_back(std::log(cert.deltas[j]));
    }
  }
  if (!pooled_x.empty()) report.pooled_exponent = -least_squares_line(pooled_x, pooled_y).slope;

  auto& r = report.passing;
  r.estimate = static_cast<double>(passing) / static_cast<double>(config.samples);
  r.standard_error = binomial_stderr(r.estimate, config.samples);
  r.analytic_bound = kAlmostAllFrequency;
  r.bound_kind = BoundKind::lower;
  r.config = config;
  r.details = {{"pooled_exponent", report.pooled_exponent},
               {"max_exponent", report.max_exponent},
               {"members", static_cast<double>(family.size())},
               {"codim", static_cast<double>(k)}};
  r.settle_verdict();
  return report;
}

}  // namespace transversal
