#include "acgd/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "acgd/errors.hpp"

namespace acgd {

const char* method_name(Method m) { return m == Method::Acgd ? "acgd" : "acgd-s"; }

std::vector<BenchTask> bench_suite(const std::string& name) {
  if (name != "default") throw InvalidArgument("unknown bench suite '" + name + "'");
  std::vector<BenchTask> tasks;
  auto add_both = [&](const std::string& label, InstanceParams p, std::vector<double> eps,
                      int max_phases) {
    for (Method m : {Method::Acgd, Method::AcgdS}) {
      tasks.push_back(BenchTask{label, InstanceSpec{p, std::nullopt}, m, eps, max_phases});
    }
  };
  for (int k : {5, 10}) {
    add_both("nonstrong_hard_k" + std::to_string(k), NonstrongHardParams{k, 1.0, 1.0, 2.0},
             {1e-3, 5e-4, 2.5e-4}, 4000);
  }
  for (std::size_t n : {std::size_t{50}, std::size_t{200}}) {
    add_both("strong_hard_n" + std::to_string(n), StrongHardParams{n, 1.0, 1.0, 0.25},
             {1e-3, 1e-4, 1e-5, 1e-6}, 120);
  }
  for (std::uint64_t seed : {1, 2, 3}) {
    add_both("random_qp_s" + std::to_string(seed), RandomQpParams{4, 2, seed},
             {1e-3, 1e-4, 1e-5}, 4000);
  }
  return tasks;
}

BenchTaskResult run_bench_task(const BenchTask& task) {
  const ProblemInstance inst = build_instance(task.spec);
  if (!inst.meta()) throw InvalidArgument("bench instances need a reference optimum");
  const InstanceMeta& meta = *inst.meta();
  const double L = aggregate_smoothness(meta, 1.0);

  BenchTaskResult res;
  for (double e : task.eps) {
    res.rows.push_back(BenchRow{task.label, method_name(task.algo), e});
  }
  std::size_t next = 0;
  const auto start = std::chrono::steady_clock::now();
  auto stop = [&](const PhaseRecord& r) {
    const double err = std::max(std::abs(r.obj_gap), r.feas_norm);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    while (next < res.rows.size() && err <= res.rows[next].eps) {
      BenchRow& row = res.rows[next++];
      row.reached = true;
      row.phase = r.t;
      row.oracle_calls = r.oracle_calls;
      row.matvecs = r.matvecs;
      row.wall_ms = ms;
    }
    return next == res.rows.size();
  };

  CostCounters counters;
  if (task.algo == Method::Acgd) {
    AcgdOptions o;
    o.stop_when = stop;
    res.trace = run_acgd(inst, L, 1.0, task.max_phases, counters, o).records;
  } else {
    AcgdSOptions o;
    o.stop_when = stop;
    const double r_bar = norm(meta.lambda_star) + 1.0;
    res.trace = run_acgd_s(inst, L, r_bar, 0.0, task.max_phases, counters, o).run.records;
  }
  return res;
}

std::string bench_table_csv(const std::vector<BenchRow>& rows) {
  std::string out = "instance,algo,eps,oracle_calls,matvecs,wall_ms\n";
  for (const auto& r : rows) {
    out += r.instance + ',' + r.algo + ',' + format_real(r.eps) + ',';
    if (r.reached) {
      out += std::to_string(r.oracle_calls) + ',' + std::to_string(r.matvecs) + ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      out += buf;
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

int bench_threads_from_env() {
  const char* v = std::getenv("ACGD_KIT_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min(n, 256L));
}

std::vector<BenchRow> run_bench(const std::string& suite, const std::filesystem::path& out_dir,
                                int threads) {
  const std::vector<BenchTask> tasks = bench_suite(suite);
  std::filesystem::create_directories(out_dir);

  std::vector<std::vector<BenchRow>> per_task(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = cursor++; i < tasks.size(); i = cursor++) {
      try {
        BenchTaskResult r = run_bench_task(tasks[i]);
        const std::string file = tasks[i].label + "_" + method_name(tasks[i].algo) + ".csv";
        write_file_atomic(out_dir / file, trace_to_csv(r.trace));
        per_task[i] = std::move(r.rows);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<BenchRow> rows;
  for (auto& v : per_task) rows.insert(rows.end(), v.begin(), v.end());
  write_file_atomic(out_dir / "bench.csv", bench_table_csv(rows));
  return rows;
}

}  // namespace acgd
