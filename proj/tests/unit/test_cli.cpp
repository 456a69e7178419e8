#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "smlab/cli.hpp"

using namespace smlab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "smlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Csv, QuotesAndHeader) {
  ExperimentRecord r{"x", 3, 2, {{"a", 1}, {"b", "q\""}}, "stat", 0.1, 0.5, 7, std::nullopt};
  std::ostringstream os;
  write_csv(os, {r});
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0].rfind("# seed-derivation", 0), 0u);
  EXPECT_EQ(l[1], "experiment_id,n,t,param_json,statistic,value,stderr,seed,wall_ms");
  EXPECT_EQ(l[2], R"(x,3,2,"{""a"":1,""b"":""q\""""}",stat,0.10000000000000001,0.5,7,)");
}

TEST(Json, RoundTrips) {
  ExperimentRecord r{"x", 3, std::nullopt, {{"a", 1}}, "stat", std::int64_t{4}, std::nullopt, std::nullopt, std::nullopt};
  std::ostringstream os;
  write_json(os, {r});
  const auto j = nlohmann::json::parse(os.str());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["value"], 4);
  EXPECT_TRUE(j[0]["t"].is_null());
  EXPECT_EQ(j[0]["param_json"]["a"], 1);
}

TEST(Cli, ExactTvValues) {
  const auto r = run({"exact-tv", "--n", "3", "--t-max", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("exact-tv,3,0,{},d_exact,5/6,,,"), std::string::npos);
  EXPECT_NE(r.out.find("exact-tv,3,2,{},d_exact,5/54,,,"), std::string::npos);
  EXPECT_NE(r.out.find("tau_mix,2,"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"exact-tv", "--n", "13"}).code, 2);
  EXPECT_EQ(run({"exact-tv", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"meeting", "--n", "20"}).code, 2);  // no seed
  EXPECT_EQ(run({"schramm", "--n", "1000", "--seed", "1", "--eps", "0.05"}).code, 2);
  EXPECT_EQ(run({"lemma-grid", "--n-max", "15"}).code, 2);
  EXPECT_EQ(run({"verify-coupling", "--n-max", "6"}).code, 0);
  EXPECT_EQ(run({"lemma-grid", "--n-max", "6"}).code, 0);
}

TEST(Cli, SeededRunsRepeat) {
  const std::vector<std::string> args{"meeting", "--n-grid", "30,40", "--trials", "20", "--seed", "9", "--stride", "50"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(run(threaded).out, a.out);
  auto other = args;
  other[6] = "10";
  EXPECT_NE(run(other).out, a.out);
}

TEST(Cli, WallTimeOnlyWhenAsked) {
  const auto plain = run({"exact-tv", "--n", "3", "--t-max", "1"});
  const auto rows = lines(plain.out);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), ',') << rows[i];
  const auto timed = run({"exact-tv", "--n", "3", "--t-max", "1", "--record-wall-time"});
  EXPECT_NE(lines(timed.out)[2].back(), ',');
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string path = ::testing::TempDir() + "smlab_cfg.toml";
  {
    std::ofstream f(path);
    f << "n-grid = [3]\nt-max = 3\n";
  }
  const auto from_file = run({"exact-tv", "--config", path});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("exact-tv,3,3,{},d,"), std::string::npos);
  const auto overridden = run({"exact-tv", "--config", path, "--t-max", "1"});
  EXPECT_EQ(overridden.out.find("exact-tv,3,2,"), std::string::npos);
  {
    std::ofstream f(path);
    f << "no_such_key = 1\n";
  }
  EXPECT_EQ(run({"exact-tv", "--config", path}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, OutFileAndJson) {
  const std::string path = ::testing::TempDir() + "smlab_out.json";
  const auto r = run({"verify-coupling", "--n-max", "4", "--format", "json", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j.back()["statistic"], "violations");
  EXPECT_EQ(j.back()["value"], 0);
  std::remove(path.c_str());
}

TEST(Recorder, ViolationRowsAreCapped) {
  ExperimentConfig cfg;
  detail::Recorder rec("t", cfg);
  for (std::int64_t i = 0; i < kViolationRowLimit + 5; ++i) rec.violation(1, "x");
  rec.close_violations();
  std::int64_t rows = 0;
  for (const auto& r : rec.result.records) rows += r.statistic == "violation";
  EXPECT_EQ(rows, kViolationRowLimit);
  EXPECT_EQ(rec.result.records.back().statistic, "violations");
  EXPECT_EQ(std::get<std::int64_t>(rec.result.records.back().value), kViolationRowLimit + 5);
  EXPECT_EQ(rec.result.exit_code(), 1);
}
