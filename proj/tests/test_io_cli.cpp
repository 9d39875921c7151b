#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "transversal/cli.hpp"
#include "transversal/io.hpp"

namespace {

using namespace transversal;
namespace fs = std::filesystem;
namespace ts = testing_support;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("transversal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    setenv("TRANSVERSAL_LOG", "info", 1);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    io::write_text_file(path(name), text);
    return path(name);
  }

  std::string write_family(const std::string& name, Eigen::Index n, Eigen::Index k, std::size_t members,
                           std::uint64_t id) const {
    auto rng = ts::rng_for(id, 0);
    io::json j;
    j["dim"] = n;
    j["codim"] = k;
    for (std::size_t m = 0; m < members; ++m) {
      io::json rows = io::json::array();
      for (Eigen::Index r = 0; r < k; ++r) {
        const Vector v = ts::gaussian_vector(rng, n);
        rows.push_back(std::vector<double>(v.data(), v.data() + n));
      }
      j["normals"].push_back(rows);
    }
    return write(name, j.dump());
  }

  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string verdict_line(const std::string& text) {
  const auto pos = text.find("# verdict");
  return pos == std::string::npos ? "" : text.substr(pos);
}

std::vector<std::string> key_values(const std::string& text, const std::string& key) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) out.push_back(line.substr(key.size() + 1));
  return out;
}

TEST(FormatNumber, RoundTripsExactly) {
  auto rng = ts::rng_for(71, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = ts::uniform_real(rng, -1, 1) * std::pow(10.0, ts::uniform_int(rng, -300, 300));
    EXPECT_EQ(std::stod(io::format_number(x)), x);
  }
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(1e-12), "1e-12");
}

TEST(FamilyJson, RoundTripIsExact) {
  Engine rng = make_engine(3, 3);
  const SubspaceFamily f = random_family(rng, 7, 3, 5);
  const io::FamilySpec back = io::family_from_json(io::parse_json(io::family_to_json(f, {"a", "b", "c", "d", "e"}).dump(), "x"));
  ASSERT_EQ(back.family.size(), 5u);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back.family[j], f[j]);
  EXPECT_EQ(back.labels[4], "e");
}

TEST(FamilyJson, ValidationNamesTheMember) {
  const auto parse = [](const std::string& s) { return io::family_from_json(io::parse_json(s, "t")); };
  try {
    parse(R"({"dim":3,"codim":1,"normals":[[[1,0,0]],[[0,0,0]]]})");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("family member 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(R"({"dim":3,"codim":2,"normals":[[[1,0,0],[2,0,0]]]})"), InputError);
  EXPECT_THROW(parse(R"({"dim":3,"codim":1,"normals":[[[1,0]]]})"), InputError);
  EXPECT_THROW(parse(R"({"dim":3,"codim":3,"normals":[[[1,0,0]]]})"), InputError);
  EXPECT_THROW(parse(R"({"dim":3,"codim":1})"), InputError);
  EXPECT_THROW(parse(R"({"dim":3,"codim":1,"normals":[[[1,"a",0]]]})"), InputError);
  EXPECT_THROW(parse(R"({"dim":3,"codim":1,"normals":[[[1,0,0]]],"labels":["a","b"]})"), InputError);
  EXPECT_THROW(io::parse_json("{not json", "t"), InputError);
}

TEST(CertificateJson, RoundTripKeepsNonFiniteScale) {
  SeparationCertificate c;
  c.deltas = {0.0, 0.0, 0.0};
  c.zero_indices = {1, 2, 3};
  c.decay_fit = fit_decay(c.deltas);
  const SeparationCertificate back = io::certificate_from_json(io::parse_json(io::certificate_to_json(c).dump(), "c"));
  EXPECT_EQ(back.deltas, c.deltas);
  EXPECT_EQ(back.zero_indices, c.zero_indices);
  EXPECT_EQ(back.decay_fit.log_scale, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(back.provenance, Provenance::measured_by_svd);
}

TEST_F(CliTest, ConstructSingleHyperplane) {
  const std::string fam = write("f.json", R"({"dim":3,"codim":1,"normals":[[[0,0,2]]]})");
  const RunResult r = run_cli({"construct", "--family", fam, "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json j = io::json::parse(r.out);
  EXPECT_EQ(j["measured"]["deltas"][0].get<double>(), 1.0);
  EXPECT_EQ(j["format"], "transversal-complement");
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["certified"]["provenance"], "certified-by-construction");
}

TEST_F(CliTest, ConstructCodimTwoReloadsWithDominance) {
  const std::string fam = write_family("f.json", 14, 2, 10, 72);
  const RunResult r = run_cli({"construct", "--family", fam, "--seed", "5", "--out", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const io::ComplementFile c = io::load_complement(path("c.json"));
  ASSERT_TRUE(c.certified && c.measured);
  const SeparationCertificate again = certify(c.complement, io::load_family(fam).family);
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_GE(again.deltas[j], c.certified->deltas[j] - 1e-9);
    EXPECT_NEAR(again.deltas[j], c.measured->deltas[j], 1e-12);
  }
}

TEST_F(CliTest, ConstructFallsBackToCubeForManyHyperplanes) {
  const std::string fam = write_family("f.json", 3, 1, 8, 73);
  const RunResult r = run_cli({"construct", "--family", fam});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::json::parse(r.out)["construction"], "cube");
}

TEST_F(CliTest, ConstructInputErrors) {
  const std::string bad = write("bad.json", R"({"dim":3,"codim":1,"normals":[[[1,0,0]],[[0,0,0]]]})");
  RunResult r = run_cli({"construct", "--family", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("family member 2"), std::string::npos);
  EXPECT_EQ(run_cli({"construct", "--family", path("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"construct", "--family", write("x.json", "{")}).code, 2);
  EXPECT_EQ(run_cli({"construct", "--family", write_family("f.json", 6, 2, 9, 74)}).code, 2);
  EXPECT_EQ(run_cli({"construct"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST_F(CliTest, ConstructionFailureExitsThree) {
  const std::string fam = write_family("f.json", 30, 1, 25, 75);
  bool saw_three = false;
  for (int seed = 0; seed < 64 && !saw_three; ++seed) {
    const RunResult r = run_cli({"construct", "--family", fam, "--seed", std::to_string(seed), "--max-tries", "1"});
    ASSERT_TRUE(r.code == 0 || r.code == 3) << r.err;
    saw_three = r.code == 3;
  }
  EXPECT_TRUE(saw_three);
}

TEST_F(CliTest, CertifyRoundTripAndVerdict) {
  const std::string fam = write_family("f.json", 12, 2, 8, 76);
  ASSERT_EQ(run_cli({"construct", "--family", fam, "--seed", "3", "--out", path("c.json")}).code, 0);
  const RunResult r = run_cli({"certify", "--family", fam, "--complement", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"j", "delta_measured", "delta_certified", "cum_exponent", "cum_log_scale"}));
  const io::ComplementFile c = io::load_complement(path("c.json"));
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_NEAR(std::stod(rows[j + 1][1]), c.measured->deltas[j], 1e-12);
    EXPECT_EQ(std::stod(rows[j + 1][2]), c.certified->deltas[j]);
  }
  EXPECT_NE(verdict_line(r.out).find("well_separating=true"), std::string::npos);
  EXPECT_NE(verdict_line(r.out).find("max_exponent=22"), std::string::npos);
}

TEST_F(CliTest, CertifyConstantFamilyAgainstOrthogonalComplement) {
  const std::string fam =
      write("f.json", R"({"dim":4,"codim":2,"normals":[[[1,0,0,0],[0,1,0,0]],[[1,0,0,0],[0,1,0,0]],[[1,0,0,0],[0,1,0,0]]]})");
  const std::string comp = write("c.json", R"({"basis":[[1,0,0,0],[0,1,0,0]]})");
  const RunResult r = run_cli({"certify", "--family", fam, "--complement", comp});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  for (std::size_t j = 1; j < rows.size(); ++j) {
    EXPECT_EQ(rows[j][1], "1");
    EXPECT_EQ(rows[j][2], "");
  }
  EXPECT_NE(verdict_line(r.out).find("well_separating=true exponent=0"), std::string::npos);
}

TEST_F(CliTest, CertifyNonComplementIsAResult) {
  const std::string fam = write("f.json", R"({"dim":3,"codim":1,"normals":[[[1,0,0]],[[0,1,0]],[[0,0,1]]]})");
  const std::string comp = write("c.json", R"({"basis":[[0,1,0]]})");
  const RunResult r = run_cli({"certify", "--family", fam, "--complement", comp});
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_NE(verdict_line(r.out).find("well_separating=false"), std::string::npos);
}

TEST_F(CliTest, CertifyDimensionMismatch) {
  const std::string fam = write("f.json", R"({"dim":3,"codim":1,"normals":[[[1,0,0]]]})");
  EXPECT_EQ(run_cli({"certify", "--family", fam, "--complement", write("c.json", R"({"basis":[[1,0,0,0]]})")}).code, 2);
  EXPECT_EQ(run_cli({"certify", "--family", fam, "--complement", write("d.json", R"({"basis":[[1,0,0],[0,1,0]]})")}).code,
            2);
  EXPECT_EQ(run_cli({"certify", "--family", fam, "--complement", write("e.json", R"({"basis":[[1,0],[0]]})")}).code, 2);
}

TEST_F(CliTest, OutputsAreByteIdenticalPerSeed) {
  const std::string fam = write_family("f.json", 10, 2, 6, 77);
  const RunResult a = run_cli({"construct", "--family", fam, "--seed", "9"});
  const RunResult b = run_cli({"construct", "--family", fam, "--seed", "9"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli({"construct", "--family", fam, "--seed", "10"}).out);
  for (const std::string suite : {"badset", "det", "inverse", "translation"}) {
    const std::vector<std::string> args{"--seed", "4", "mc", suite, "--samples", "2000"};
    const RunResult x = run_cli(args);
    ASSERT_EQ(x.code, 0) << suite << ": " << x.err;
    EXPECT_EQ(x.out, run_cli(args).out) << suite;
  }
}

TEST_F(CliTest, McDetScalarOracle) {
  const RunResult r = run_cli({"mc", "det", "--k", "1", "--zero-shifts", "--samples", "100000", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json j = io::json::parse(r.out);
  EXPECT_NEAR(j["slab"]["coefficient"].get<double>(), 2.0, 0.05);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_TRUE(j["epsilon_hat"].contains("stderr"));
  EXPECT_TRUE(j["epsilon_hat"].contains("bound"));
}

TEST_F(CliTest, McBadsetToyInstance) {
  const RunResult r = run_cli({"mc", "badset", "--dim", "3", "--members", "50", "--samples", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json j = io::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "pass");
  ASSERT_EQ(j["reports"].size(), 3u);
  for (const auto& rep : j["reports"]) {
    EXPECT_TRUE(rep.contains("estimate"));
    EXPECT_TRUE(rep.contains("stderr"));
    EXPECT_TRUE(rep.contains("bound"));
    EXPECT_EQ(rep["verdict"], "pass");
  }
}

TEST_F(CliTest, McErrors) {
  EXPECT_EQ(run_cli({"mc", "bogus"}).code, 2);
  EXPECT_EQ(run_cli({"mc"}).code, 2);
  EXPECT_EQ(run_cli({"mc", "badset", "--samples", "10"}).code, 2);
  EXPECT_EQ(run_cli({"mc", "badset", "--epsilon", "0.01,0.1"}).code, 2);
  EXPECT_EQ(run_cli({"mc", "translation", "--translation", "1,2,3"}).code, 2);
}

TEST_F(CliTest, VolumeDiagonalWithMonteCarlo) {
  const RunResult r = run_cli({"volume", "--halfwidths", "1,1", "--normal", "1,1", "--mc"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(key_values(r.out, "projection_volume").at(0)), 2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_EQ(key_values(r.out, "mc_agreement").at(0), "true");
  EXPECT_LE(std::stod(key_values(r.out, "mc_relative_error").at(0)), 0.01);
}

TEST_F(CliTest, VolumeAxisAndSlab) {
  const RunResult r = run_cli({"volume", "--halfwidths", "1,1,1,1", "--normal", "3,0,0,0", "--delta", "0.25"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(key_values(r.out, "projection_volume").at(0), "8");
  EXPECT_EQ(key_values(r.out, "slab_bound").at(0), "4");
  EXPECT_TRUE(key_values(r.out, "mc_agreement").empty());
}

TEST_F(CliTest, VolumeErrors) {
  EXPECT_EQ(run_cli({"volume", "--halfwidths", "1,1", "--normal", "0,0"}).code, 2);
  EXPECT_EQ(run_cli({"volume", "--halfwidths", "1,1", "--normal", "1,0,0"}).code, 2);
  EXPECT_EQ(run_cli({"volume", "--halfwidths", "1,-1", "--normal", "1,0"}).code, 2);
  EXPECT_EQ(run_cli({"volume", "--halfwidths", "1,x", "--normal", "1,0"}).code, 2);
}

TEST_F(CliTest, QuietLoggingKeepsTheErrorStreamClean) {
  const std::string fam = write("f.json", R"({"dim":3,"codim":1,"normals":[[[0,0,1]]]})");
  EXPECT_NE(run_cli({"construct", "--family", fam}).err.find("info:"), std::string::npos);
  setenv("TRANSVERSAL_LOG", "quiet", 1);
  const RunResult r = run_cli({"construct", "--family", fam});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty()) << r.err;
  EXPECT_NE(run_cli({"mc", "bogus"}).err.find("unknown suite"), std::string::npos);
}

}  // namespace
