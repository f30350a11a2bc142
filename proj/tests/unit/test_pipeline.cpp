// Copyright 2026 The egonet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "egonet/error.hpp"
#include "egonet/pipeline.hpp"
#include "test_util.hpp"

namespace egonet::pipeline {
namespace {

namespace fs = std::filesystem;

const char* const kReports[] = {"kstar_density.csv", "circles.csv",       "mapping.csv",
                                "ccdf.csv",          "rings_diffusion.csv", "ring_volumes.csv"};

KeyValueFile kv(const std::string& text) {
  std::istringstream in(text);
  return KeyValueFile::parse(in);
}

int cli(const std::string& args) {
  const std::string cmd = std::string(EGONET_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// summary.json up to the timings block, which is the last key.
std::string summary_without_timings(const fs::path& dir) {
  const std::string text = testing::read_file(dir / "summary.json");
  const auto at = text.find("\"timings_ms\"");
  return at == std::string::npos ? text : text.substr(0, at);
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

TEST(Config, AppliesKeysAndResolvesPaths) {
  PipelineConfig cfg;
  cfg.apply(kv("format=windowed\ninput=w.csv\nk_max=8\nfixed_k=3\nthreads=4\nlikelihood=classification\n"
               "drop_other_egos=false\nmin_account_age=3\n"),
            "/data");
  EXPECT_EQ(cfg.format, InputFormat::windowed);
  EXPECT_EQ(cfg.input, fs::path("/data/w.csv"));
  EXPECT_EQ(cfg.k_max, 8u);
  EXPECT_EQ(cfg.effective_fixed_k(), 3u);
  EXPECT_EQ(cfg.threads, 4u);
  EXPECT_EQ(cfg.aic.model, layers::LikelihoodModel::classification);
  EXPECT_FALSE(cfg.assembly.drop_other_egos);
  EXPECT_EQ(cfg.eligibility.min_account_age, 3.0);
  EXPECT_EQ(cfg.effective_reference_size(), 132.5);
}

TEST(Config, Defaults) {
  PipelineConfig cfg;
  EXPECT_EQ(cfg.effective_fixed_k(), 5u);
  EXPECT_FALSE(cfg.effective_reference_size().has_value());
  cfg.format = InputFormat::windowed;
  EXPECT_EQ(cfg.effective_fixed_k(), 4u);
}

TEST(Config, Errors) {
  auto code = [](const std::string& text) {
    try {
      PipelineConfig cfg;
      cfg.apply(kv(text));
      cfg.check();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::range;
  };
  EXPECT_EQ(code("colour=blue\n"), ErrorCode::config);
  EXPECT_EQ(code("k_max=0\n"), ErrorCode::config);
  EXPECT_EQ(code("format=xml\n"), ErrorCode::config);
  EXPECT_EQ(code("drop_other_egos=maybe\n"), ErrorCode::config);
  EXPECT_EQ(code("w1=7\n"), ErrorCode::config);
  EXPECT_EQ(code("\n"), ErrorCode::config);  // no input
  EXPECT_EQ(code("input=/nonexistent/events.csv\n"), ErrorCode::io);
}

TEST(ErrorRecords, ExitCodesAndJson) {
  EXPECT_EQ(exit_status(ErrorCode::config), 1);
  EXPECT_EQ(exit_status(ErrorCode::no_eligible_egos), 2);
  EXPECT_EQ(exit_status(ErrorCode::parse), 3);
  EXPECT_EQ(exit_status(ErrorCode::io), 3);
  EXPECT_EQ(exit_status(ErrorCode::degenerate_ego), 4);
  EXPECT_EQ(error_record(ErrorCode::no_eligible_egos, "no eligible egos"),
            R"({"error":{"code":"no_eligible_egos","message":"no eligible egos"}})");
}

TEST(ThinCurve, KeepsEndpointsAndBound) {
  testing::Gen gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 0; i < gen.index(1, 500); ++i) curve.emplace_back(i, 1.0 / (i + 1));
    const std::size_t max_points = gen.index(2, 60);
    const auto thin = thin_curve(curve, max_points);
    if (curve.size() <= max_points) {
      EXPECT_EQ(thin, curve);
    } else {
      EXPECT_LE(thin.size(), max_points);
    }
    EXPECT_EQ(thin.front(), curve.front());
    EXPECT_EQ(thin.back(), curve.back());
  }
}

TEST(RunPipeline, EmptyEligibleSetExitsTwo) {
  const auto dir = testing::scratch_dir("empty-eligible");
  write_text(dir / "events.csv", "source,target,kind,months_before_download\n1,2,reply,2\n1,3,reply,1\n");
  PipelineConfig cfg;
  cfg.input = dir / "events.csv";
  cfg.output_dir = dir / "out";
  EXPECT_EQ(run_pipeline(cfg, Stage::all), 2);
  const std::string record = testing::read_file(cfg.output_dir / "error.json");
  EXPECT_NE(record.find("\"no eligible egos\""), std::string::npos);
  EXPECT_NE(record.find("\"no_eligible_egos\""), std::string::npos);
}

TEST(RunPipeline, MalformedInputExitsThree) {
  const auto dir = testing::scratch_dir("malformed");
  write_text(dir / "events.csv", "source,target,kind,months_before_download\n1,2,poke,2\n");
  PipelineConfig cfg;
  cfg.input = dir / "events.csv";
  cfg.output_dir = dir / "out";
  EXPECT_EQ(run_pipeline(cfg, Stage::all), 3);
  EXPECT_NE(testing::read_file(cfg.output_dir / "error.json").find("line 2"), std::string::npos);
}

TEST(RunPipeline, IngestStageWritesTies) {
  const auto dir = testing::scratch_dir("ingest-stage");
  std::string text = "source,target,kind,months_before_download\n";
  for (int i = 0; i < 200; ++i) text += "1," + std::to_string(2 + i % 7) + ",reply," + std::to_string(9.0 - i * 0.04) + "\n";
  write_text(dir / "events.csv", text);
  PipelineConfig cfg;
  cfg.input = dir / "events.csv";
  cfg.output_dir = dir / "out";
  ASSERT_EQ(run_pipeline(cfg, Stage::ingest), 0);
  const std::string ties = testing::read_file(cfg.output_dir / "ties.csv");
  EXPECT_EQ(ties.rfind("ego,alter,frequency,normalized_frequency", 0), 0u);
  EXPECT_EQ(std::count(ties.begin(), ties.end(), '\n'), 8);
  EXPECT_FALSE(fs::exists(cfg.output_dir / "circles.csv"));
}

class Fixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = testing::scratch_dir("fixture");
    const std::string spec = std::string(EGONET_TEST_DATA) + "/fixture.spec";
    ASSERT_EQ(cli("synth --spec " + spec + " --egos 50 --seed 2026 -o " + (dir_ / "in").string()), 0);
  }

  static int run(const std::string& out, const std::string& extra = "") {
    const auto in = dir_ / "in";
    return cli("all -i " + (in / "events.csv").string() + " --accounts " + (in / "accounts.csv").string() +
               " -o " + (dir_ / out).string() + " " + extra);
  }

  static fs::path dir_;
};

fs::path Fixture::dir_;

TEST_F(Fixture, ReportsHaveHeadersAndAreIdempotent) {
  ASSERT_EQ(run("a"), 0);
  ASSERT_EQ(run("b"), 0);
  for (const char* name : kReports) {
    const std::string a = testing::read_file(dir_ / "a" / name);
    ASSERT_FALSE(a.empty()) << name;
    EXPECT_TRUE(std::isalpha(static_cast<unsigned char>(a[0]))) << name;
    EXPECT_EQ(a, testing::read_file(dir_ / "b" / name)) << name;
  }
  EXPECT_EQ(summary_without_timings(dir_ / "a"), summary_without_timings(dir_ / "b"));
}

TEST_F(Fixture, ThreadCountDoesNotChangeReports) {
  ASSERT_EQ(run("t1", "--threads 1"), 0);
  ASSERT_EQ(run("t8", "--threads 8"), 0);
  for (const char* name : kReports) {
    EXPECT_EQ(testing::read_file(dir_ / "t1" / name), testing::read_file(dir_ / "t8" / name)) << name;
  }
  EXPECT_EQ(summary_without_timings(dir_ / "t1"), summary_without_timings(dir_ / "t8"));
}

TEST_F(Fixture, MatchesGoldenReports) {
  ASSERT_EQ(run("golden"), 0);
  const fs::path golden = fs::path(EGONET_TEST_DATA) / "golden";
  if (const char* update = std::getenv("EGONET_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    fs::create_directories(golden);
    for (const char* name : kReports) fs::copy_file(dir_ / "golden" / name, golden / name, fs::copy_options::overwrite_existing);
    write_text(golden / "summary.json", summary_without_timings(dir_ / "golden"));
  }
  for (const char* name : kReports) {
    EXPECT_EQ(testing::read_file(dir_ / "golden" / name), testing::read_file(golden / name)) << name;
  }
  EXPECT_EQ(summary_without_timings(dir_ / "golden"), testing::read_file(golden / "summary.json"));
}

TEST_F(Fixture, WindowedInputRuns) {
  const auto in = dir_ / "in";
  // Fixture links are younger than the default six-month age threshold.
  write_text(dir_ / "windowed.cfg", "format=windowed\nmin_account_age=1\n");
  ASSERT_EQ(cli("all --config " + (dir_ / "windowed.cfg").string() + " -i " + (in / "windows.csv").string() +
                " -o " + (dir_ / "win").string()),
            0);
  const std::string mapping = testing::read_file(dir_ / "win" / "mapping.csv");
  EXPECT_NE(mapping.find("support clique"), std::string::npos);
  EXPECT_EQ(mapping.find("super support clique"), std::string::npos);
  EXPECT_NE(testing::read_file(dir_ / "win" / "summary.json").find("\"calibration\""), std::string::npos);
}

TEST_F(Fixture, UsageErrorsExitOne) {
  EXPECT_EQ(cli("all --k-max 0 -i x"), 1);
  EXPECT_EQ(cli("frobnicate"), 1);
  const auto cfg = dir_ / "bad.cfg";
  write_text(cfg, "colour=blue\n");
  EXPECT_EQ(cli("all --config " + cfg.string()), 1);
}

}  // namespace
}  // namespace egonet::pipeline
