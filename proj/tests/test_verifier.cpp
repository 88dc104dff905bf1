#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "thetalab/verifier.hpp"

using namespace thetalab;
using namespace thetalab::verifier;
using nlohmann::json;

namespace {

ErrorKind load_error(const json& j) {
  try {
    RunConfig::from_json(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

json diag_tau(double t12) {
  return json::array({json::array({json::array({0, 1}), json::array({t12, 0}), json::array({0, 0})}),
                      json::array({json::array({t12, 0}), json::array({0, 1.3}), json::array({0, 0})}),
                      json::array({json::array({0, 0}), json::array({0, 0}), json::array({0, 0.7})})});
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig d = RunConfig::defaults();
  EXPECT_EQ(d.samples, 200);
  EXPECT_EQ(d.tau(1, 1), cplx(0, 1.3));
  const RunConfig back = RunConfig::from_json(d.to_json());
  EXPECT_EQ(back.to_json(), d.to_json());
}

TEST(Config, PartialOverride) {
  const RunConfig c = RunConfig::from_json(json{{"samples", 12}, {"seed", 5}, {"suites", {"symbolic", "theta"}},
                                                {"tolerances", {{"alignment", 1e-5}}}, {"tau", diag_tau(0.1)}});
  EXPECT_EQ(c.samples, 12);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.tol("alignment"), 1e-5);
  EXPECT_EQ(c.tol("involution"), 1e-8);
  EXPECT_EQ(c.expanded_suites(), (std::vector<std::string>{"theta", "symbolic"}));
  EXPECT_EQ(c.tau(0, 1), cplx(0.1, 0));
}

TEST(Config, AllExpandsInRegistryOrder) {
  RunConfig c = RunConfig::defaults();
  c.suites = {"bidouble", "all"};
  EXPECT_EQ(c.expanded_suites(), kSuiteOrder);
}

TEST(Config, Rejections) {
  json bad = diag_tau(0.1);
  bad[1][0] = json::array({0.2, 0});
  EXPECT_EQ(load_error(json{{"tau", bad}}), ErrorKind::ConfigInvalid);
  json neg = diag_tau(0.0);
  neg[2][2] = json::array({0, -0.7});
  EXPECT_EQ(load_error(json{{"tau", neg}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"suites", {"nope"}}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"samples", 0}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"seed", -1}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"colour", 1}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"tolerances", {{"made_up", 1.0}}}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json{{"coeffs", {{"b", {0, 0}}, {"c", {1, 0}}, {"d", {1, 0}}}}}), ErrorKind::ConfigInvalid);
  EXPECT_EQ(load_error(json::array()), ErrorKind::ConfigInvalid);
}

TEST(Run, SymbolicSuiteReportsLedger) {
  RunConfig c = RunConfig::defaults();
  c.suites = {"symbolic"};
  const Report r = run(c);
  int minors = 0;
  for (const auto& check : r.checks) {
    EXPECT_EQ(check.suite, "symbolic");
    if (check.check.rfind("minor ", 0) == 0) ++minors;
  }
  EXPECT_EQ(minors, 10);
  EXPECT_TRUE(r.samples.empty());
  const json j = r.to_json();
  EXPECT_EQ(j["checks"].size(), r.checks.size());
  EXPECT_EQ(j["summary"]["fail"].get<int>(), r.count(Status::fail));
}

TEST(Run, CsvFormat) {
  RunConfig c = RunConfig::defaults();
  c.suites = {"canonical"};
  c.samples = 6;
  const Report r = run(c);
  const auto path = std::filesystem::temp_directory_path() / "thetalab_test_samples.csv";
  write_samples_csv(r, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::vector<std::string> lines;
  std::string line;
  std::istringstream ls(text);
  while (std::getline(ls, line)) lines.push_back(line);
  ASSERT_GE(lines.size(), 7u);
  EXPECT_EQ(lines[0].substr(0, 13), "kind,z1re,z1i");
  std::size_t samples = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 23);
    samples += lines[i].rfind("sample,", 0) == 0 ? 1 : 0;
  }
  EXPECT_EQ(samples, 6u);
  EXPECT_EQ(lines.size() - 1, r.samples.size());
  std::filesystem::remove(path);
}

TEST(Run, IoErrorOnBadPath) {
  Report r;
  try {
    write_samples_csv(r, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}
