#include "cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "storagelab/io.h"

namespace storagelab::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = STORAGELAB_TEST_DATA_DIR;
const std::string kDemoTrace = kData + "/demo_trace.jsonl";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ =
        fs::temp_directory_path() /
        ("storagelab_cli_" +
         std::string(
             ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::string Read(const std::string& name) const {
    absl::StatusOr<std::string> text = ReadFile(dir_ / name);
    EXPECT_TRUE(text.ok()) << name;
    return text.value_or("");
  }

  void SimulateAll(const std::string& trace) {
    for (const char* policy :
         {"permissive", "blocking", "site-keyed", "page-length"}) {
      ASSERT_EQ(Run({"simulate", "--policy", policy, "--trace", trace, "--out",
                     Path(std::string("runs/") + policy)}),
                kExitOk)
          << err_.str();
    }
  }

  std::vector<std::string> AllRuns() const {
    return {Path("runs/permissive"), Path("runs/blocking"),
            Path("runs/site-keyed"), Path("runs/page-length")};
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SimulateWritesOutputsAndManifest) {
  ASSERT_EQ(
      Run({"simulate", "--policy", "page-length", "--trace", kDemoTrace,
           "--out", Path("run"), "--filters", kData + "/demo_filters.txt"}),
      kExitOk)
      << err_.str();
  for (const char* f : {"flows.csv", "frames.jsonl", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  }
  const auto manifest = nlohmann::json::parse(Read("run/manifest.json"));
  EXPECT_EQ(manifest["config"]["policy"], "page-length");
  EXPECT_EQ(manifest["inputs"]["trace"]["sha256"],
            Sha256Hex(*ReadFile(kDemoTrace)));
  EXPECT_EQ(manifest["outputs"]["flows.csv"], Sha256Hex(Read("run/flows.csv")));
  EXPECT_TRUE(manifest["inputs"].contains("filters"));
}

TEST_F(CliTest, SimulateIsByteIdenticalOnRerun) {
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(Run({"simulate", "--policy", "site-keyed", "--trace", kDemoTrace,
                   "--out", Path(out)}),
              kExitOk);
  }
  for (const char* f : {"flows.csv", "frames.jsonl"}) {
    EXPECT_EQ(Read(std::string("a/") + f), Read(std::string("b/") + f));
  }
}

TEST_F(CliTest, ParallelSimulationMatchesSerial) {
  ASSERT_EQ(Run({"simulate", "--policy", "permissive", "--trace", kDemoTrace,
                 "--out", Path("serial")}),
            kExitOk);
  ASSERT_EQ(Run({"simulate", "--policy", "permissive", "--trace", kDemoTrace,
                 "--out", Path("parallel"), "--jobs", "2"}),
            kExitOk);
  EXPECT_EQ(Read("serial/flows.csv"), Read("parallel/flows.csv"));
  EXPECT_EQ(Read("serial/frames.jsonl"), Read("parallel/frames.jsonl"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Run({"simulate", "--policy", "bogus", "--trace", kDemoTrace,
                 "--out", Path("x")}),
            kExitUsage);
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"--help"}), kExitOk);
  EXPECT_EQ(Run({"simulate", "--help"}), kExitOk);
  EXPECT_EQ(Run({"simulate", "--policy", "blocking", "--trace",
                 Path("missing.jsonl"), "--out", Path("x")}),
            kExitInput);
  ASSERT_TRUE(WriteFile(dir_ / "bad.jsonl", "{\"type\":\"nope\"}\n").ok());
  EXPECT_EQ(Run({"simulate", "--policy", "blocking", "--trace",
                 Path("bad.jsonl"), "--out", Path("x")}),
            kExitInput);
  EXPECT_NE(err_.str().find("trace line 1"), std::string::npos) << err_.str();
}

TEST_F(CliTest, GenTraceIsDeterministic) {
  for (const char* name : {"t1.jsonl", "t2.jsonl"}) {
    ASSERT_EQ(Run({"gen-trace", "--sites", "3", "--trackers", "1", "--iters",
                   "2", "--seed", "7", "--out", Path(name)}),
              kExitOk);
  }
  EXPECT_EQ(Read("t1.jsonl"), Read("t2.jsonl"));
  EXPECT_FALSE(Read("t1.jsonl").empty());
  EXPECT_TRUE(fs::exists(dir_ / "t1.jsonl.manifest.json"));
}

TEST_F(CliTest, CrossSiteWritesOneCurvePerRun) {
  SimulateAll(kDemoTrace);
  std::vector<std::string> args = {"metrics", "cross-site", "--out", Path("cs"),
                                   "--runs"};
  for (const std::string& run : AllRuns()) args.push_back(run);
  ASSERT_EQ(Run(args), kExitOk) << err_.str();
  for (const char* name :
       {"permissive", "blocking", "site-keyed", "page-length"}) {
    EXPECT_TRUE(fs::exists(dir_ / "cs" / (std::string(name) + ".csv"))) << name;
  }
  EXPECT_TRUE(fs::exists(dir_ / "cs" / "manifest.json"));
}

TEST_F(CliTest, SimilarityWithOptimalPreset) {
  SimulateAll(kDemoTrace);
  std::vector<std::string> args = {"metrics", "similarity", "--node-filter",
                                   "optimal", "--out",      Path("sim"),
                                   "--runs"};
  for (const std::string& run : AllRuns()) args.push_back(run);
  ASSERT_EQ(Run(args), kExitOk) << err_.str();
  const auto manifest = nlohmann::json::parse(Read("sim/manifest.json"));
  EXPECT_EQ(manifest["config"]["node_filter"],
            NodeTypeSet::Optimal().ToString());
}

TEST_F(CliTest, RejectsBadNodeFilter) {
  SimulateAll(kDemoTrace);
  EXPECT_EQ(Run({"metrics", "similarity", "--node-filter", "Script,Nope",
                 "--out", Path("sim"), "--runs", Path("runs/permissive")}),
            kExitUsage);
}

TEST_F(CliTest, MismatchedTracesRejected) {
  SimulateAll(kDemoTrace);
  ASSERT_EQ(Run({"gen-trace", "--sites", "2", "--trackers", "1", "--profiles",
                 "2", "--seed", "3", "--out", Path("other.jsonl")}),
            kExitOk);
  ASSERT_EQ(Run({"simulate", "--policy", "blocking", "--trace",
                 Path("other.jsonl"), "--out", Path("other")}),
            kExitOk);
  EXPECT_EQ(Run({"metrics", "similarity", "--out", Path("sim"), "--runs",
                 Path("runs/permissive"), Path("other")}),
            kExitInput);
  EXPECT_NE(err_.str().find("different traces"), std::string::npos);
}

TEST_F(CliTest, OptimizeAndCandidatesAndPicf) {
  SimulateAll(kDemoTrace);
  std::vector<std::string> runs = AllRuns();
  std::vector<std::string> args = {"metrics", "optimize", "--out", Path("opt"),
                                   "--runs"};
  args.insert(args.end(), runs.begin(), runs.end());
  ASSERT_EQ(Run(args), kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(Read("opt/optimization.json"));
  EXPECT_EQ(report["subsets_evaluated"], 2047);

  ASSERT_EQ(Run({"metrics", "candidates", "--k", "5", "--out", Path("cand"),
                 "--runs", Path("runs/permissive")}),
            kExitOk);
  EXPECT_NE(out_.str().find("short of k=5"), std::string::npos);

  ASSERT_EQ(Run({"metrics", "picf", "--out", Path("picf"), "--runs",
                 Path("runs/permissive")}),
            kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "picf" / "permissive.csv"));
}

TEST_F(CliTest, Kappa) {
  ASSERT_EQ(Run({"metrics", "kappa", "--grades", kData + "/demo_grades.csv",
                 "--out", Path("k")}),
            kExitOk)
      << err_.str();
  const std::string breakage = Read("k/breakage.csv");
  EXPECT_NE(breakage.find("blocking,2,8,25"), std::string::npos) << breakage;
}

TEST(CliBinaryTest, ProcessExitCodes) {
  const std::string bin = STORAGELAB_BIN;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status(bin + " --help"), 0);
  EXPECT_EQ(status(bin + " simulate --policy nope --trace x --out y"), 1);
  EXPECT_EQ(status(bin + " simulate --policy blocking --trace /nonexistent "
                         "--out /tmp/storagelab_never"),
            2);
}

}  // namespace
}  // namespace storagelab::cli
