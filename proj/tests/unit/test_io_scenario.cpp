#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gevlab/error.hpp"
#include "gevlab/io.hpp"
#include "gevlab/scenario.hpp"

using namespace gevlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gevlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json small_energy_job() {
  return Json::parse(R"({
    "name": "e", "kind": "energy_estimate",
    "grid": {"n": 32, "length": 2.0, "x0": 1.0},
    "sigma": 0.5, "taudot": "calibrate", "seed": 5,
    "data": {"noise": 0.1}
  })");
}

}  // namespace

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
}

TEST(Io, GitBlobHash) {
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Io, MatrixDumpLayout) {
  const auto dir = scratch("dump");
  CMatrix m(2, 3);
  m << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8), Complex(9, 10), Complex(-1, 0.5);
  write_matrix_dump(dir / "m.bin", m);
  const std::string bytes = slurp(dir / "m.bin");
  ASSERT_EQ(bytes.size(), 6u * 16u);
  // second entry of the first row, real part, little-endian 3.0
  double v;
  std::memcpy(&v, bytes.data() + 16, 8);
  EXPECT_EQ(v, 3.0);
  const unsigned char last = static_cast<unsigned char>(bytes[16 + 7]);
  EXPECT_EQ(last, 0x40);  // high byte of 3.0 comes last
  EXPECT_EQ(read_matrix_dump(dir / "m.bin", 2, 3), m);
  EXPECT_THROW(read_matrix_dump(dir / "m.bin", 3, 3), Error);
}

TEST(Io, AuditJson) {
  AuditRecord r{"x", 1.5, {1.0, 2.0}, true};
  const Json j = to_json(r);
  EXPECT_EQ(j.at("check"), "x");
  EXPECT_EQ(j.at("constant"), 1.5);
  EXPECT_EQ(j.at("witness").size(), 2u);
  EXPECT_EQ(j.at("pass"), true);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"check", "constant", "witness", "pass"}));
}

TEST(Io, EnergyCsvHeader) {
  EnergyBreakdown b;
  b.t = 0.1;
  const std::string csv = energy_csv({b});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,tau,E,E1,E2,E3,E4,r2,r3,r4");
}

TEST(Scenario, UnknownKeyIsAnError) {
  auto j = small_energy_job();
  j["grid"]["lenght"] = 2.0;
  try {
    parse_job(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("lenght"), std::string::npos);
  }
  auto k = small_energy_job();
  k["colour"] = "red";
  EXPECT_THROW(parse_job(k), ValidationError);
}

TEST(Scenario, UncertaintyBound) {
  auto j = small_energy_job();
  j["c"] = 3.0;
  EXPECT_THROW(parse_job(j), ValidationError);
}

TEST(Scenario, Kinds) {
  for (auto k : {ScenarioKind::energy_estimate, ScenarioKind::symbol_audit,
                 ScenarioKind::metric_audit, ScenarioKind::quantizer_audit,
                 ScenarioKind::cjs_sweep, ScenarioKind::constraint_table}) {
    EXPECT_EQ(scenario_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(scenario_kind_from_string("nope"), ValidationError);
  EXPECT_THROW(make_time_coefficient("sin", 1.0, 2), ValidationError);
  EXPECT_EQ(make_time_coefficient("const:2", 1.0, 2).a(0.3), 2.0);
}

TEST(Scenario, DuplicateJobNames) {
  const auto doc = Json::parse(R"({"jobs": [
    {"name": "a", "kind": "constraint_table"},
    {"name": "a", "kind": "constraint_table"}]})");
  EXPECT_THROW(parse_scenario(doc), ValidationError);
}

TEST(Scenario, TraceIsByteIdentical) {
  const auto sc = parse_job(small_energy_job());
  const auto d1 = scratch("run1"), d2 = scratch("run2");
  EXPECT_EQ(run_job(sc, d1, {false, 1}).exit_code, kExitPass);
  EXPECT_EQ(run_job(sc, d2, {false, 1}).exit_code, kExitPass);
  for (const char* f : {"trace.csv", "summary.json", "failures.json", "metadata.json"}) {
    ASSERT_TRUE(fs::exists(d1 / f)) << f;
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
  const auto meta = Json::parse(slurp(d1 / "metadata.json"));
  EXPECT_EQ(meta.at("config_hash"), git_blob_hash(sc.config.dump()));
  EXPECT_EQ(meta.at("config"), sc.config);
}

TEST(Scenario, CapExceededIsAnAssertionFailure) {
  auto j = small_energy_job();
  j["taudot"] = 0.0;
  j["max_ratio_cap"] = 1.0;
  j["nonlinearity"] = Json::parse(R"({"preset": "wave"})");
  const auto d = scratch("cap");
  const auto out = run_job(parse_job(j), d);
  EXPECT_EQ(out.exit_code, kExitAssertion) << out.message;
  const auto failures = Json::parse(slurp(d / "failures.json"));
  EXPECT_FALSE(failures.empty());
}

TEST(Scenario, ConstraintJobSummary) {
  const auto d = scratch("table");
  const auto sc = parse_job(Json::parse(
      R"({"kind": "constraint_table", "sigma_min": "0.4", "sigma_max": "0.6", "step": "0.05"})"));
  EXPECT_EQ(run_job(sc, d).exit_code, kExitPass);
  const std::string csv = slurp(d / "trace.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}
