#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "transversal/error.hpp"
#include "transversal/geometry.hpp"
#include "transversal/prevalence.hpp"
#include "transversal/separator.hpp"

namespace transversal::io {

using nlohmann::json;

inline constexpr const char* kComplementFormat = "transversal-complement";
inline constexpr int kComplementVersion = 1;

/// Shortest decimal that parses back to the same double; independent of the
/// process locale. Negative zero prints as 0.
inline std::string format_number(double value) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Family files
//
//   {"dim": n, "codim": k, "normals": [ [[row_1], ..., [row_k]], ... ],
//    "labels": ["...", ...]}
//
// Rows of each member need not be orthonormal; they are orthonormalized on
// load and must have rank k at tolerance 1e-10.

struct FamilySpec {
  SubspaceFamily family;
  std::vector<std::string> labels;
};

inline json family_to_json(const SubspaceFamily& family, const std::vector<std::string>& labels = {}) {
  json j;
  j["dim"] = family.ambient_dim();
  j["codim"] = family.codim();
  json normals = json::array();
  for (const auto& v : family) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < v.codim(); ++r) {
      std::vector<double> row(v.normals().col(r).data(), v.normals().col(r).data() + v.ambient_dim());
      rows.push_back(row);
    }
    normals.push_back(rows);
  }
  j["normals"] = normals;
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

inline FamilySpec family_from_json(const json& j) {
  auto field = [&](const char* name) -> const json& {
    if (!j.is_object() || !j.contains(name)) throw InputError(std::string("family: missing field '") + name + "'");
    return j.at(name);
  };
  const json& dim_field = field("dim");
  const json& codim_field = field("codim");
  if (!dim_field.is_number_integer() || !codim_field.is_number_integer())
    throw InputError("family: dim and codim must be integers");
  const auto n = dim_field.get<long long>();
  const auto k = codim_field.get<long long>();
  if (n < 2 || k < 1 || k >= n) throw InputError("family: need dim >= 2 and 1 <= codim < dim");
  const json& normals = field("normals");
  if (!normals.is_array() || normals.empty()) throw InputError("family: 'normals' must be a non-empty array");

  std::vector<CodimSubspace> members;
  for (std::size_t idx = 0; idx < normals.size(); ++idx) {
    const std::string where = "family member " + std::to_string(idx + 1);
    const json& rows = normals[idx];
    if (!rows.is_array() || static_cast<long long>(rows.size()) != k)
      throw InputError(where + ": expected " + std::to_string(k) + " normal rows");
    Matrix m(n, k);
    for (long long r = 0; r < k; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<long long>(row.size()) != n)
        throw InputError(where + ": normal row " + std::to_string(r + 1) + " must have " + std::to_string(n) +
                         " entries");
      for (long long c = 0; c < n; ++c) {
        const json& x = row[static_cast<std::size_t>(c)];
        if (!x.is_number()) throw InputError(where + ": non-numeric entry");
        m(c, r) = x.get<double>();
      }
    }
    if (!m.allFinite()) throw InputError(where + ": non-finite entry");
    try {
      members.push_back(CodimSubspace::from_normals(m));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  FamilySpec loaded{SubspaceFamily(std::move(members)), {}};
  if (j.contains("labels")) {
    const json& labels = j.at("labels");
    if (!labels.is_array() || labels.size() != normals.size())
      throw InputError("family: 'labels' must have one entry per member");
    for (const auto& l : labels) {
      if (!l.is_string()) throw InputError("family: labels must be strings");
      loaded.labels.push_back(l.get<std::string>());
    }
  }
  return loaded;
}

inline FamilySpec load_family(const std::string& path) {
  return family_from_json(parse_json(read_text_file(path), path));
}

// ---------------------------------------------------------------------------
// Complement files

inline json certificate_to_json(const SeparationCertificate& cert) {
  json j;
  j["provenance"] = to_string(cert.provenance);
  j["deltas"] = cert.deltas;
  j["constants"] = cert.constants;
  j["decay_fit"] = {{"slope", cert.decay_fit.slope},
                    {"log_scale", cert.decay_fit.log_scale},
                    {"exponent", cert.decay_fit.exponent()}};
  j["zero_indices"] = cert.zero_indices;
  return j;
}

inline SeparationCertificate certificate_from_json(const json& j) {
  SeparationCertificate cert;
  try {
    const auto prov = j.at("provenance").get<std::string>();
    if (prov == "certified-by-construction")
      cert.provenance = Provenance::certified_by_construction;
    else if (prov == "measured-by-svd")
      cert.provenance = Provenance::measured_by_svd;
    else
      throw InputError("certificate: unknown provenance '" + prov + "'");
    cert.deltas = j.at("deltas").get<std::vector<double>>();
    if (j.contains("constants")) cert.constants = j.at("constants").get<std::map<std::string, double>>();
    if (j.contains("decay_fit")) {
      // non-finite values are written as null
      const json& fit = j.at("decay_fit");
      cert.decay_fit.slope = fit.at("slope").is_null() ? 0.0 : fit.at("slope").get<double>();
      cert.decay_fit.log_scale = fit.at("log_scale").is_null() ? -std::numeric_limits<double>::infinity()
                                                               : fit.at("log_scale").get<double>();
    }
    if (j.contains("zero_indices")) cert.zero_indices = j.at("zero_indices").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  return cert;
}

inline json basis_to_json(const SpanSubspace& c) {
  json basis = json::array();
  for (Eigen::Index i = 0; i < c.dim(); ++i) {
    std::vector<double> v(c.basis().col(i).data(), c.basis().col(i).data() + c.ambient_dim());
    basis.push_back(v);
  }
  return basis;
}

inline json complement_to_json(const ComplementResult& r, const std::string& construction) {
  json j;
  j["format"] = kComplementFormat;
  j["version"] = kComplementVersion;
  j["construction"] = construction;
  j["dim"] = r.complement.ambient_dim();
  j["codim"] = r.complement.dim();
  j["seed"] = r.rng_seed;
  j["basis"] = basis_to_json(r.complement);
  j["certified"] = certificate_to_json(r.certificate);
  j["measured"] = certificate_to_json(r.measured);
  j["rejection_stats"] = {{"attempted", r.rejection_stats.attempted}, {"accepted", r.rejection_stats.accepted}};
  return j;
}

/// A complement file: the subspace plus whichever certificates it carries.
struct ComplementFile {
  SpanSubspace complement;
  std::optional<SeparationCertificate> certified;
  std::optional<SeparationCertificate> measured;
};

inline ComplementFile complement_from_json(const json& j) {
  if (!j.is_object() || !j.contains("basis") || !j.at("basis").is_array() || j.at("basis").empty())
    throw InputError("complement: missing non-empty 'basis'");
  const json& basis = j.at("basis");
  const std::size_t n = basis[0].is_array() ? basis[0].size() : 0;
  if (n == 0) throw InputError("complement: basis vectors must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!basis[i].is_array() || basis[i].size() != n)
      throw InputError("complement: basis vector " + std::to_string(i + 1) + " has the wrong length");
    for (std::size_t c = 0; c < n; ++c) {
      if (!basis[i][c].is_number()) throw InputError("complement: non-numeric entry");
      m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) = basis[i][c].get<double>();
    }
  }
  ComplementFile out{SpanSubspace::from_vectors(m), std::nullopt, std::nullopt};
  if (j.contains("certified")) out.certified = certificate_from_json(j.at("certified"));
  if (j.contains("measured")) out.measured = certificate_from_json(j.at("measured"));
  return out;
}

inline ComplementFile load_complement(const std::string& path) {
  return complement_from_json(parse_json(read_text_file(path), path));
}

// ---------------------------------------------------------------------------
// Monte Carlo reports

inline json config_to_json(const McConfig& c) {
  return {{"samples", c.samples},
          {"seed", c.seed},
          {"epsilon_grid", c.epsilon_grid},
          {"horizon", c.horizon},
          {"radius", c.radius}};
}

inline json report_to_json(const McReport& r) {
  json j;
  j["estimate"] = r.estimate;
  j["stderr"] = r.standard_error;
  j["bound"] = r.analytic_bound ? json(*r.analytic_bound) : json(nullptr);
  j["bound_kind"] = r.bound_kind == BoundKind::upper ? "upper" : "lower";
  j["verdict"] = r.pass ? "pass" : "fail";
  j["bound_vacuous"] = r.bound_vacuous;
  j["details"] = r.details;
  j["config"] = config_to_json(r.config);
  return j;
}

}  // namespace transversal::io
