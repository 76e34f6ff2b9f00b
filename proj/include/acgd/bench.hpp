#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "acgd/io.hpp"
#include "acgd/search.hpp"

namespace acgd {

struct BenchTask {
  std::string label;
  InstanceSpec spec;
  Method algo = Method::Acgd;
  std::vector<double> eps;  // accuracy targets, decreasing
  int max_phases = 0;
};

// Counters at the first logged phase whose ergodic average satisfies
// max{|F - F*|, ||[g]_+||} <= eps.
struct BenchRow {
  std::string instance;
  std::string algo;
  double eps = 0.0;
  bool reached = false;
  int phase = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t matvecs = 0;
  double wall_ms = 0.0;
};

struct BenchTaskResult {
  std::vector<BenchRow> rows;
  std::vector<PhaseRecord> trace;
};

const char* method_name(Method m);

// Known suites: "default". Throws InvalidArgument otherwise.
std::vector<BenchTask> bench_suite(const std::string& name);

// Runs one task at the metadata smoothness constant until every target is
// reached or max_phases is exhausted.
BenchTaskResult run_bench_task(const BenchTask& task);

std::string bench_table_csv(const std::vector<BenchRow>& rows);

// ACGD_KIT_THREADS, default 1.
int bench_threads_from_env();

// Runs the suite with up to `threads` concurrent tasks, writing
// <label>_<algo>.csv traces and bench.csv into out_dir. Rows come back in
// suite order regardless of scheduling.
std::vector<BenchRow> run_bench(const std::string& suite, const std::filesystem::path& out_dir,
                                int threads);

}  // namespace acgd
