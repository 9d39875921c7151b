#pragma once

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/logger.h>
#include <spdlog/sinks/ostream_sink.h>

#include "transversal/error.hpp"
#include "transversal/generators.hpp"
#include "transversal/io.hpp"
#include "transversal/polytope.hpp"
#include "transversal/prevalence.hpp"
#include "transversal/separator.hpp"

namespace transversal::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kAlgorithmError = 3 };

/// Logger on the diagnostic stream, level from TRANSVERSAL_LOG
/// (quiet | info | debug; default info). quiet still reports errors.
inline std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("transversal", sink);
  logger->set_pattern("%l: %v");
  const char* env = std::getenv("TRANSVERSAL_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet")
    logger->set_level(spdlog::level::err);
  else if (level == "debug")
    logger->set_level(spdlog::level::debug);
  else
    logger->set_level(spdlog::level::info);
  return logger;
}

/// Picks the construction for a family: the certified recursive box
/// construction when J <= n - k, otherwise (hyperplanes only) the cube
/// sampler with its constant certificate.
struct Construction {
  ComplementResult result;
  std::string name;
};

inline Construction construct_for(const SubspaceFamily& family, std::uint64_t seed, int max_tries) {
  if (static_cast<Eigen::Index>(family.size()) <= family.ambient_dim() - family.codim())
    return {common_complement(family, seed, max_tries), "recursive-box"};
  if (family.codim() == 1) return {cube_complement(family, seed, max_tries), "cube"};
  throw InputError("family has " + std::to_string(family.size()) + " members; codimension " +
                   std::to_string(family.codim()) + " needs J <= n - k = " +
                   std::to_string(family.ambient_dim() - family.codim()));
}

struct Options {
  std::uint64_t seed = 0;

  std::string family_path;
  std::string out_path;
  std::string complement_path;
  std::optional<double> max_exponent;
  int max_tries = kDefaultMaxTries;

  std::string suite;
  std::size_t samples = 10000;
  Eigen::Index dim = 2;
  Eigen::Index k = 2;
  std::size_t members = 50;
  std::vector<double> grid;
  bool zero_shifts = false;
  double threshold = 1e-6;
  double radius = 1.0;
  std::vector<double> translation;

  std::vector<double> halfwidths;
  std::vector<double> normal;
  std::optional<double> delta;
  bool mc = false;
  std::size_t volume_samples = 1000000;
};

namespace detail {

inline std::string csv_number(double v) { return io::format_number(v); }

inline int cmd_construct(const Options& o, std::ostream& out, spdlog::logger& log) {
  const io::FamilySpec loaded = io::load_family(o.family_path);
  const Construction c = construct_for(loaded.family, o.seed, o.max_tries);
  log.info("constructed {} complement of dimension {} for {} members ({} draws, {} accepted)", c.name,
           c.result.complement.dim(), loaded.family.size(), c.result.rejection_stats.attempted,
           c.result.rejection_stats.accepted);
  const std::string text = io::complement_to_json(c.result, c.name).dump(2) + "\n";
  if (o.out_path.empty())
    out << text;
  else
    io::write_text_file(o.out_path, text);
  return kOk;
}

inline int cmd_certify(const Options& o, std::ostream& out, spdlog::logger& log) {
  const io::FamilySpec loaded = io::load_family(o.family_path);
  const io::ComplementFile file = io::load_complement(o.complement_path);
  const SubspaceFamily& family = loaded.family;
  if (file.complement.ambient_dim() != family.ambient_dim() || file.complement.dim() != family.codim())
    throw InputError("complement of dimension " + std::to_string(file.complement.dim()) + " in R^" +
                     std::to_string(file.complement.ambient_dim()) + " does not match a codimension-" +
                     std::to_string(family.codim()) + " family in R^" + std::to_string(family.ambient_dim()));
  if (file.certified && file.certified->deltas.size() != family.size())
    throw InputError("embedded certificate has " + std::to_string(file.certified->deltas.size()) +
                     " entries for a family of " + std::to_string(family.size()));

  const SeparationCertificate measured = certify(file.complement, family);
  const double max_exponent =
      o.max_exponent.value_or(5.0 * static_cast<double>(family.codim() * family.codim()) + 2.0);

  out << "j,delta_measured,delta_certified,cum_exponent,cum_log_scale\n";
  for (std::size_t j = 0; j < family.size(); ++j) {
    out << (j + 1) << ',' << csv_number(measured.deltas[j]) << ',';
    if (file.certified) out << csv_number(file.certified->deltas[j]);
    out << ',';
    if (j >= 1) {
      const DecayFit fit = fit_decay(std::span<const double>(measured.deltas).first(j + 1));
      out << csv_number(fit.exponent()) << ',' << csv_number(fit.log_scale);
    } else {
      out << ',';
    }
    out << '\n';
  }

  bool verdict = measured.is_common_complement();
  double exponent = measured.decay_fit.exponent();
  double scale = 0.0;
  if (verdict && family.size() >= 3) {
    const WellSeparation w = assess_well_separation(measured.deltas, max_exponent);
    verdict = w.well_separating;
    exponent = w.exponent;
    scale = w.scale;
  } else if (verdict) {
    log.info("fewer than 3 members: verdict reduces to the common-complement check");
  }
  if (!measured.is_common_complement())
    log.info("not a common complement: transversality vanishes at index {}", measured.zero_indices.front());
  out << "# verdict well_separating=" << (verdict ? "true" : "false") << " exponent=" << csv_number(exponent)
      << " scale=" << csv_number(scale) << " max_exponent=" << csv_number(max_exponent)
      << " members=" << family.size() << '\n';
  return kOk;
}

inline std::vector<Vector> columns_of(const Matrix& m) {
  std::vector<Vector> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m.col(c));
  return out;
}

inline int mc_badset(const Options& o, std::ostream& out) {
  Engine rng = make_engine(o.seed, 0x62616473);
  const SubspaceFamily family = o.family_path.empty() ? random_family(rng, o.dim, 1, o.members)
                                                      : io::load_family(o.family_path).family;
  McConfig config;
  config.samples = o.samples;
  config.seed = o.seed;
  config.epsilon_grid = o.grid.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3} : o.grid;
  config.validate();

  io::json j;
  j["suite"] = "badset";
  j["dim"] = family.ambient_dim();
  j["members"] = family.size();
  bool pass = true;
  if (config.epsilon_grid.size() >= 3) {
    const BadSetSweep sweep = mc_bad_set_sweep(family, config);
    for (const auto& r : sweep.reports) j["reports"].push_back(io::report_to_json(r));
    j["fit"] = {{"linear", {{"intercept", sweep.linear.coefficients[0]},
                            {"intercept_stderr", sweep.linear.standard_errors[0]},
                            {"slope", sweep.linear.coefficients[1]}}},
                {"curved", {{"intercept", sweep.curved.coefficients[0]},
                            {"intercept_stderr", sweep.curved.standard_errors[0]},
                            {"slope", sweep.curved.coefficients[1]},
                            {"curvature", sweep.curved.coefficients[2]}}},
                {"vanishes_at_zero", sweep.vanishes_at_zero}};
    pass = sweep.all_pass && sweep.vanishes_at_zero;
  } else {
    for (std::size_t i = 0; i < config.epsilon_grid.size(); ++i) {
      McConfig local = config;
      local.seed = derive_seed(config.seed, i);
      const McReport r = mc_bad_set_measure(family, config.epsilon_grid[i], local);
      pass = pass && r.pass;
      j["reports"].push_back(io::report_to_json(r));
    }
  }
  j["verdict"] = pass ? "pass" : "fail";
  out << j.dump(2) << '\n';
  return kOk;
}

inline std::vector<Matrix> random_shifts(Engine& rng, Eigen::Index k, std::size_t count,
                                         std::span<const double> norm_caps) {
  std::vector<Matrix> shifts;
  for (std::size_t j = 0; j < count; ++j) {
    Matrix g = random_gaussian_matrix(rng, k, k);
    Eigen::JacobiSVD<Matrix> svd(g);
    g *= uniform01(rng) * norm_caps[j] / svd.singularValues()[0];
    shifts.push_back(g);
  }
  return shifts;
}

inline int mc_det(const Options& o, std::ostream& out) {
  transversal::detail::require(o.k >= 1, "det: --k must be positive");
  Engine rng = make_engine(o.seed, 0x646574);
  const std::vector<double> caps(o.members, 1.0);
  const std::vector<Matrix> shifts =
      o.zero_shifts ? std::vector<Matrix>(o.members, Matrix::Zero(o.k, o.k)) : random_shifts(rng, o.k, o.members, caps);
  McConfig config;
  config.samples = o.samples;
  config.seed = o.seed;
  if (!o.grid.empty())
    config.epsilon_grid = o.grid;
  else if (o.k == 1)
    config.epsilon_grid = {0.5, 0.25, 0.1, 0.05, 0.01};
  else
    config.epsilon_grid = {1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  const DetReport report = mc_det_lower_bound(shifts, Matrix::Zero(o.k, o.k), config, o.threshold);

  io::json j;
  j["suite"] = "det";
  j["k"] = o.k;
  j["members"] = o.members;
  j["zero_shifts"] = o.zero_shifts;
  j["slab"] = {{"eta", report.slab.etas},
               {"coefficient", report.slab.coefficient},
               {"intercept", report.slab.intercept},
               {"r_squared", report.slab.r_squared}};
  for (const auto& r : report.slab.reports) j["slab"]["reports"].push_back(io::report_to_json(r));
  j["epsilon_hat"] = io::report_to_json(report.positive);
  std::vector<double> sorted = report.epsilon_hat;
  std::sort(sorted.begin(), sorted.end());
  j["epsilon_hat_quantiles"] = {{"min", sorted.front()},
                                {"q01", sorted[sorted.size() / 100]},
                                {"median", sorted[sorted.size() / 2]}};
  j["verdict"] = report.positive.pass ? "pass" : "fail";
  out << j.dump(2) << '\n';
  return kOk;
}

inline int mc_inverse(const Options& o, std::ostream& out) {
  transversal::detail::require(o.k >= 1, "inverse: --k must be positive");
  Engine rng = make_engine(o.seed, 0x696e76);
  std::vector<double> deltas(o.members);
  std::vector<double> caps(o.members);
  for (std::size_t j = 0; j < o.members; ++j) {
    deltas[j] = 1.0 / std::sqrt(static_cast<double>(j + 1));
    caps[j] = 1.0 / deltas[j];
  }
  const std::vector<Matrix> shifts = random_shifts(rng, o.k, o.members, caps);
  McConfig config;
  config.samples = o.samples;
  config.seed = o.seed;
  const InverseReport report = mc_inverse_bound(shifts, deltas, config);
  io::json j;
  j["suite"] = "inverse";
  j["k"] = o.k;
  j["members"] = o.members;
  j["report"] = io::report_to_json(report.positive);
  j["verdict"] = report.positive.pass ? "pass" : "fail";
  out << j.dump(2) << '\n';
  return kOk;
}

inline int mc_translation(const Options& o, std::ostream& out, spdlog::logger& log) {
  const SubspaceFamily family =
      o.family_path.empty() ? axis_perturbed_hyperplanes(2, 3) : io::load_family(o.family_path).family;
  const Eigen::Index n = family.ambient_dim();
  const Eigen::Index k = family.codim();
  std::vector<Vector> translation;
  if (o.translation.empty()) {
    for (Eigen::Index i = 0; i < k; ++i) translation.push_back(Vector::Unit(n, i));
  } else {
    transversal::detail::require(static_cast<Eigen::Index>(o.translation.size()) == n * k,
                    "translation: --translation needs k * n values");
    for (Eigen::Index i = 0; i < k; ++i)
      translation.emplace_back(Eigen::Map<const Vector>(o.translation.data() + i * n, n));
  }
  const Construction base = construct_for(family, derive_seed(o.seed, 0x7472), o.max_tries);
  log.info("translation base: {} construction", base.name);
  McConfig config;
  config.samples = o.samples;
  config.seed = o.seed;
  config.radius = o.radius;
  const TranslationReport report = translation_experiment(base.result, family, translation, config, o.max_exponent);
  io::json j;
  j["suite"] = "translation";
  j["dim"] = n;
  j["codim"] = k;
  j["members"] = family.size();
  j["base_construction"] = base.name;
  j["report"] = io::report_to_json(report.passing);
  j["pooled_exponent"] = report.pooled_exponent;
  j["exponent_ceiling"] = 5.0 * static_cast<double>(k * k) + 2.0;
  const bool pass = report.passing.pass && report.pooled_exponent <= 5.0 * static_cast<double>(k * k) + 2.5;
  j["verdict"] = pass ? "pass" : "fail";
  out << j.dump(2) << '\n';
  return kOk;
}

inline int cmd_mc(const Options& o, std::ostream& out, spdlog::logger& log) {
  if (o.suite == "badset") return mc_badset(o, out);
  if (o.suite == "det") return mc_det(o, out);
  if (o.suite == "inverse") return mc_inverse(o, out);
  if (o.suite == "translation") return mc_translation(o, out, log);
  throw InputError("unknown suite '" + o.suite + "' (expected badset, det, inverse or translation)");
}

inline int cmd_volume(const Options& o, std::ostream& out) {
  transversal::detail::require(!o.halfwidths.empty(), "volume: --halfwidths is required");
  transversal::detail::require(o.normal.size() == o.halfwidths.size(), "volume: --normal must match --halfwidths in length");
  const Box box(o.halfwidths);
  Vector v = Eigen::Map<const Vector>(o.normal.data(), static_cast<Eigen::Index>(o.normal.size()));
  const double norm = v.norm();
  transversal::detail::require(norm > 0.0 && std::isfinite(norm), "volume: normal must be non-zero");
  v /= norm;

  const double projected = box_projection_volume(box, v);
  out << "projection_volume=" << csv_number(projected) << '\n';
  if (o.delta) out << "slab_bound=" << csv_number(slab_measure_bound(box, v, *o.delta)) << '\n';
  if (o.mc) {
    const McEstimate shadow = mc_shadow_volume(box, v, o.volume_samples, o.seed);
    const double rel = std::abs(shadow.estimate - projected) / projected;
    out << "mc_projection_volume=" << csv_number(shadow.estimate) << '\n';
    out << "mc_projection_stderr=" << csv_number(shadow.standard_error) << '\n';
    out << "mc_relative_error=" << csv_number(rel) << '\n';
    out << "mc_agreement=" << (rel <= 0.01 ? "true" : "false") << '\n';
    if (o.delta) {
      const McEstimate slab = mc_slab_measure(box, v, *o.delta, o.volume_samples, derive_seed(o.seed, 1));
      out << "mc_slab_measure=" << csv_number(slab.estimate) << '\n';
      out << "mc_slab_stderr=" << csv_number(slab.standard_error) << '\n';
      out << "mc_slab_within_bound="
          << (slab.estimate <= slab_measure_bound(box, v, *o.delta) + 3.0 * slab.standard_error ? "true" : "false")
          << '\n';
    }
  }
  return kOk;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 success, 2 input or validation error, 3 algorithmic failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  Options o;
  CLI::App app{"Common complements of subspace families: construction, certification, Monte Carlo checks",
               "transversal"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "seed for every stochastic component")->capture_default_str();

  auto* construct = app.add_subcommand("construct", "build a certified common complement");
  construct->add_option("--family", o.family_path, "family file")->required();
  construct->add_option("--out", o.out_path, "output file (stdout when omitted)");
  construct->add_option("--seed", o.seed, "seed");
  construct->add_option("--max-tries", o.max_tries, "rejection sampler budget per call");

  auto* certify_cmd = app.add_subcommand("certify", "measure transversality of a complement against a family");
  certify_cmd->add_option("--family", o.family_path, "family file")->required();
  certify_cmd->add_option("--complement", o.complement_path, "complement file")->required();
  certify_cmd->add_option("--max-exponent", o.max_exponent, "largest admissible decay exponent (default 5k^2+2)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo suites");
  mc->add_option("suite", o.suite, "badset | det | inverse | translation")->required();
  mc->add_option("--seed", o.seed, "seed");
  mc->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  mc->add_option("--family", o.family_path, "family file (badset, translation)");
  mc->add_option("--dim", o.dim, "ambient dimension of a random family (badset)");
  mc->add_option("--members", o.members, "number of members / matrices");
  mc->add_option("--k", o.k, "matrix size (det, inverse)");
  mc->add_option("--epsilon,--eta", o.grid, "decreasing grid of epsilon / eta values")->delimiter(',');
  mc->add_flag("--zero-shifts", o.zero_shifts, "use A_j = 0 (det)");
  mc->add_option("--threshold", o.threshold, "eps-hat reporting threshold (det)");
  mc->add_option("--radius", o.radius, "coefficient ball radius (translation)");
  mc->add_option("--translation", o.translation, "k*n translation entries, vector by vector")->delimiter(',');
  mc->add_option("--max-exponent", o.max_exponent, "decay exponent ceiling (translation)");
  mc->add_option("--max-tries", o.max_tries, "rejection sampler budget (translation)");

  auto* volume = app.add_subcommand("volume", "projection volume of a box and slab bound");
  volume->add_option("--halfwidths", o.halfwidths, "h1,h2,...")->delimiter(',')->required();
  volume->add_option("--normal", o.normal, "v1,v2,... (normalized)")->delimiter(',')->required();
  volume->add_option("--delta", o.delta, "slab half-width");
  volume->add_flag("--mc", o.mc, "cross-check with Monte Carlo");
  volume->add_option("--samples", o.volume_samples, "Monte Carlo samples for --mc");
  volume->add_option("--seed", o.seed, "seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    log->error("{}", e.what());
    return kInputError;
  }

  try {
    if (*construct) return detail::cmd_construct(o, out, *log);
    if (*certify_cmd) return detail::cmd_certify(o, out, *log);
    if (*mc) return detail::cmd_mc(o, out, *log);
    if (*volume) return detail::cmd_volume(o, out);
  } catch (const InputError& e) {
    log->error("{}", e.what());
    return kInputError;
  } catch (const AlgorithmError& e) {
    log->error("{}", e.what());
    return kAlgorithmError;
  }
  return kInputError;
}

}  // namespace transversal::cli
