#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "examsched/documents.hpp"
#include "examsched/text.hpp"
#include "support/oracle.hpp"

using namespace examsched;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(EXAMSCHED_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("examsched-cli-" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string d(const std::string& name = "") const { return (dir / name).string(); }
};

}  // namespace

TEST_F(CliTest, IngestSolveEvaluate) {
  auto r = run("ingest --data-dir " + oracle::fixture_dir("tiny") + " --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"instance.json", "validation.json", "grouping.json"}) EXPECT_TRUE(fs::exists(d(f))) << f;

  r = run("solve --instance " + d("instance.json") + " --k 3 --seed 1 --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  Json sched = parse_document(text::read_file(d("schedule.json")), "schedule");
  Json report = parse_document(text::read_file(d("report.json")), "report");
  EXPECT_TRUE(report["hard_feasible"].get<bool>());

  r = run("evaluate --instance " + d("instance.json") + " --schedule " + d("schedule.json") + " --out-dir -");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(Json::parse(r.out)["weighted_objective"], report["weighted_objective"]);

  r = run("export schedule --instance " + d("instance.json") + " --schedule " + d("schedule.json") +
          " --format csv --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(d("schedule.csv")));
  r = run("export model --instance " + d("instance.json") + " --format mps --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NO_THROW(read_mps(text::read_file(d("model.mps"))));
}

TEST_F(CliTest, SingletonScheduleHasNoInconvenience) {
  ASSERT_EQ(run("ingest --data-dir " + oracle::fixture_dir("singleton") + " --out-dir " + d()).code, 0);
  auto r = run("solve --method greedy --instance " + d("instance.json") + " --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("evaluate --instance " + d("instance.json") + " --schedule " + d("schedule.json") + " --out-dir -");
  ASSERT_EQ(r.code, 0) << r.out;
  Json report = Json::parse(r.out);
  for (const auto& row : report["rows"]) EXPECT_EQ(row["value"], 0) << row["key"];
  EXPECT_EQ(report["weighted_objective"], 0.0);
}

TEST_F(CliTest, PortfolioIsReproducible) {
  ASSERT_EQ(run("ingest --data-dir " + oracle::fixture_dir("tiny") + " --out-dir " + d()).code, 0);
  fs::create_directories(d("a"));
  fs::create_directories(d("b"));
  for (const char* sub : {"a", "b"}) {
    auto r = run("portfolio --instance " + d("instance.json") + " --serial --seed 7 --out-dir " + d(sub));
    ASSERT_EQ(r.code, 0) << r.out;
  }
  EXPECT_EQ(text::read_file(d("a/manifest.json")), text::read_file(d("b/manifest.json")));
  EXPECT_FALSE(fs::exists(d("a/timings.json")));
  Json manifest = Json::parse(text::read_file(d("a/manifest.json")));
  EXPECT_EQ(manifest["runs"].size(), 20u);
  EXPECT_EQ(manifest["best"].size(), 4u);
}

TEST_F(CliTest, ExitCodes) {
  fs::copy(oracle::fixture_dir("tiny"), d("data"));
  text::write_file(d("data/constraints.csv"), "MW-1500,Tue-1,require\nMW-1500,Tue-1,forbid\n");
  auto r = run("ingest --data-dir " + d("data") + " --out-dir " + d());
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("PIN_BLOCK_CONFLICT"), std::string::npos);
  EXPECT_TRUE(fs::exists(d("validation.json")));

  r = run("solve --instance " + d("missing.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("frobnicate");
  EXPECT_NE(r.code, 0);

  ASSERT_EQ(run("ingest --data-dir " + oracle::fixture_dir("tiny") + " --out-dir " + d()).code, 0);
  r = run("solve --instance " + d("instance.json") + " --time-limit-phase2 -5");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("CONFIGURATION_ERROR"), std::string::npos);
  r = run("solve --instance " + d("instance.json") + " --backend external --method exact --out-dir " + d());
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST_F(CliTest, GenerateWritesRegistrarFiles) {
  auto r = run("generate --seed 3 --students 200 --courses 40 --faculty 20 --out-dir " + d());
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("ingest --data-dir " + d() + " --out-dir " + d());
  EXPECT_EQ(r.code, 0) << r.out;
}
