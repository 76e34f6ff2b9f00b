#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "acgd/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("acgd_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of the tool; stdout goes to out.txt, stderr to err.txt.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + ACGD_KIT_CLI_PATH + "\" " + args + " > \"" +
                            path("out.txt") + "\" 2> \"" + path("err.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const { return acgd::read_file(dir_ / name); }

  fs::path dir_;
};

TEST_F(Cli, GenEchoesParameters) {
  ASSERT_EQ(run("gen --type nonstrong_hard --k 1 --beta 1 --gamma 1 --l 2 --out " + path("i.json")), 0);
  const json j = json::parse(read("i.json"));
  EXPECT_EQ(j["type"], "nonstrong_hard");
  EXPECT_EQ(j["params"]["k"], 1);
  EXPECT_EQ(j["params"]["l"], 2.0);
}

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --type random_qp --n 2 --m 1 --seed 7 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen --type random_qp --n 2 --m 1 --seed 7 --out " + path("b.json")), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  ASSERT_EQ(run("gen --type random_qp --n 2 --m 1 --seed 7"), 0);
  EXPECT_EQ(read("out.txt"), read("a.json"));
}

TEST_F(Cli, GenRejectsBadParameters) {
  EXPECT_EQ(run("gen --type strong_hard --alpha 2 --lbar-g 1 --l 1 --out " + path("s.json")), 3);
  EXPECT_FALSE(fs::exists(path("s.json")));
  EXPECT_EQ(run("gen --type triangle"), 3);
  EXPECT_EQ(run("gen --type random_qp --n 9 --m 1"), 3);
  EXPECT_EQ(run("gen --type random_qp --frobnicate 2"), 3);
  EXPECT_EQ(run("gen --type random_qp --domain torus"), 3);
  EXPECT_EQ(run(""), 3);
}

TEST_F(Cli, GenDomainOverride) {
  ASSERT_EQ(run("gen --type nonstrong_hard --k 2 --domain ball --radius 2.5 --out " + path("b.json")), 0);
  const json j = json::parse(read("b.json"));
  EXPECT_EQ(j["domain"]["kind"], "ball");
  EXPECT_EQ(j["domain"]["radius"], 2.5);
  EXPECT_EQ(j["domain"]["center"].size(), 5u);
}

TEST_F(Cli, SearchSolvesABoundedQpWithEitherMethod) {
  ASSERT_EQ(run("gen --type random_qp --n 4 --m 2 --seed 3 --out " + path("q.json")), 0);
  for (const char* algo : {"acgd", "acgd-s"}) {
    ASSERT_EQ(run(std::string("solve --algo ") + algo + " --L search --eps 1e-4 --c 1 --instance " +
                  path("q.json") + " --summary " + path("s.json") + " --trace " + path("t.csv")),
              0)
        << algo << ": " << read("err.txt");
    const json s = json::parse(read("s.json"));
    EXPECT_LE(s["gap"].get<double>(), 1e-4);
    EXPECT_LE(s["feas_norm"].get<double>(), 1e-4);
    EXPECT_TRUE(s["success"].get<bool>());
    for (const char* key : {"doublings", "final_guess", "oracle_calls", "matvecs"}) {
      EXPECT_TRUE(s.contains(key)) << key;
    }
    EXPECT_EQ(read("t.csv").rfind(std::string(acgd::kTraceHeader) + "\n", 0), 0u);
  }
}

TEST_F(Cli, FixedConstantRunsHaveOracleParity) {
  ASSERT_EQ(run("gen --type random_qp --n 4 --m 2 --seed 3 --out " + path("q.json")), 0);
  std::uint64_t calls[2];
  int i = 0;
  for (const char* algo : {"acgd", "acgd-s"}) {
    run(std::string("solve --algo ") + algo + " --L meta --max-phases 40 --eps 1e-2 --instance " +
        path("q.json") + " --summary " + path("s.json"));
    calls[i++] = json::parse(read("s.json"))["oracle_calls"].get<std::uint64_t>();
  }
  EXPECT_EQ(calls[0], calls[1]);
  EXPECT_EQ(calls[0], 41u);
}

TEST_F(Cli, RerunsAreIdentical) {
  ASSERT_EQ(run("gen --type nonstrong_hard --k 3 --out " + path("h.json")), 0);
  const std::string args = "solve --algo acgd-s --L 36 --max-phases 50 --eps 1e-1 --instance " +
                           path("h.json") + " --summary " + path("s.json") + " --trace ";
  run(args + path("t1.csv"));
  run(args + path("t2.csv"));
  const std::string t1 = read("t1.csv");
  EXPECT_EQ(t1, read("t2.csv"));
  EXPECT_EQ(std::count(t1.begin(), t1.end(), '\n'), 51);
}

TEST_F(Cli, SolveExitCodes) {
  ASSERT_EQ(run("gen --type nonstrong_hard --k 3 --out " + path("h.json")), 0);
  const std::string inst = " --instance " + path("h.json");
  EXPECT_EQ(run("solve --eps 0" + inst), 3);
  EXPECT_EQ(run("solve --c 0.5" + inst), 3);
  EXPECT_EQ(run("solve --algo newton" + inst), 3);
  EXPECT_EQ(run("solve --L fast" + inst), 3);
  EXPECT_EQ(run("solve --instance " + path("missing.json")), 3);
  // The chain lives in free space, so the search has no radius to work with.
  EXPECT_EQ(run("solve --L search" + inst), 3);
  // One phase cannot reach 1e-9.
  EXPECT_EQ(run("solve --L 36 --max-phases 1 --eps 1e-9" + inst), 2);
  const json s = json::parse(read("out.txt"));
  EXPECT_FALSE(s["success"].get<bool>());
}

TEST_F(Cli, BenchKeepsUnrelatedFiles) {
  const fs::path out = dir_ / "bench";
  fs::create_directories(out);
  acgd::write_file_atomic(out / "mine.txt", "untouched");
  ASSERT_EQ(run("bench --suite default --out " + out.string()), 0) << read("err.txt");
  EXPECT_EQ(acgd::read_file(out / "mine.txt"), "untouched");
  EXPECT_TRUE(fs::exists(out / "bench.csv"));
  EXPECT_EQ(read("out.txt"), acgd::read_file(out / "bench.csv"));
}

TEST_F(Cli, UnknownSuiteWritesNothing) {
  const fs::path out = dir_ / "nowhere";
  EXPECT_EQ(run("bench --suite enormous --out " + out.string()), 3);
  EXPECT_FALSE(fs::exists(out));
}

}  // namespace
