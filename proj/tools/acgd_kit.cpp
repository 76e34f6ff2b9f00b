#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "acgd/bench.hpp"
#include "acgd/errors.hpp"
#include "acgd/io.hpp"
#include "acgd/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBudget = 2;
constexpr int kExitConfig = 3;

struct GenFlags {
  std::string type;
  std::string out;
  int k = 1;
  double beta = 1.0;
  double gamma = 1.0;
  double l = 1.0;
  std::size_t n = 2;
  std::size_t m = 1;
  double lbar_g = 1.0;
  double alpha = 0.25;
  std::uint64_t seed = 0;
  std::string domain;
  double radius = 1.0;
  double lower = -1.0;
  double upper = 1.0;
};

struct SolveFlags {
  std::string instance;
  std::string algo = "acgd";
  double eps = 1e-3;
  double c = 1.0;
  double r = 1.0;
  double r_bar = 0.0;
  double delta = 0.0;
  std::string L = "search";
  double L0 = 0.0;
  int max_phases = 1000;
  int max_doublings = 40;
  std::string trace;
  std::string summary;
};

struct BenchFlags {
  std::string suite = "default";
  std::string out = "bench_out";
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    acgd::write_file_atomic(path, content);
  }
}

int cmd_gen(const GenFlags& f) {
  acgd::InstanceSpec spec;
  if (f.type == "nonstrong_hard") {
    spec.params = acgd::NonstrongHardParams{f.k, f.beta, f.gamma, f.l};
  } else if (f.type == "strong_hard") {
    spec.params = acgd::StrongHardParams{f.n, f.lbar_g, f.l, f.alpha};
  } else if (f.type == "random_qp") {
    spec.params = acgd::RandomQpParams{f.n, f.m, f.seed};
  } else {
    throw acgd::InvalidArgument("unknown instance type '" + f.type + "'");
  }
  // Generating once validates the parameters before anything is written.
  const acgd::ProblemInstance inst = acgd::build_instance(spec);
  const std::size_t dim = inst.dim();
  if (f.domain == "ball") {
    spec.domain = acgd::Domain::ball(acgd::Vector(dim, 0.0), f.radius);
  } else if (f.domain == "box") {
    spec.domain = acgd::Domain::box(acgd::Vector(dim, f.lower), acgd::Vector(dim, f.upper));
  } else if (f.domain == "free") {
    spec.domain = acgd::Domain::free(dim);
  } else if (!f.domain.empty()) {
    throw acgd::InvalidArgument("unknown domain kind '" + f.domain + "'");
  }
  emit(f.out, acgd::instance_to_json(spec));
  return kExitOk;
}

int cmd_solve(const SolveFlags& f) {
  if (!(f.eps > 0.0)) throw acgd::InvalidArgument("--eps must be positive");
  if (!(f.c >= 1.0)) throw acgd::InvalidArgument("--c must be at least 1");
  if (!(f.r > 0.0)) throw acgd::InvalidArgument("--r must be positive");
  if (f.max_phases < 1) throw acgd::InvalidArgument("--max-phases must be positive");
  if (f.algo != "acgd" && f.algo != "acgd-s") {
    throw acgd::InvalidArgument("--algo must be acgd or acgd-s");
  }
  const acgd::Method method = f.algo == "acgd" ? acgd::Method::Acgd : acgd::Method::AcgdS;
  const acgd::ProblemInstance inst =
      acgd::build_instance(acgd::instance_from_json(acgd::read_file(f.instance)));
  const auto& meta = inst.meta();

  acgd::RunSummary sum;
  std::vector<acgd::PhaseRecord> records;
  acgd::CostCounters counters;

  if (f.L == "search") {
    if (!inst.domain().bounded()) throw acgd::InvalidArgument("--L search needs a bounded domain");
    acgd::SearchConfig cfg;
    cfg.eps = f.eps;
    cfg.c = f.c;
    cfg.r = f.r;
    cfg.method = method;
    cfg.max_doublings = f.max_doublings;
    cfg.initial_guess = f.L0 > 0.0 ? f.L0 : 1.0;
    cfg.log_every = 1;
    const acgd::SearchReport rep = acgd::run_search(inst, cfg, counters);
    for (const auto& round : rep.rounds) {
      records.insert(records.end(), round.records.begin(), round.records.end());
    }
    sum.doublings = rep.doublings_used;
    sum.final_guess = rep.final_guess;
    sum.feas_norm = rep.certificate.feas_norm;
    sum.gap = rep.certificate.gap;
    sum.success = rep.success;
  } else {
    double L = 0.0;
    if (f.L == "meta") {
      if (!meta) throw acgd::InvalidArgument("--L meta needs an instance with a known optimum");
      L = acgd::aggregate_smoothness(*meta, f.r);
    } else {
      try {
        std::size_t used = 0;
        L = std::stod(f.L, &used);
        if (used != f.L.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw acgd::InvalidArgument("--L must be a number, 'search' or 'meta'");
      }
    }
    if (!(L > 0.0)) throw acgd::InvalidArgument("--L must be positive");
    acgd::RunTrace trace;
    if (method == acgd::Method::Acgd) {
      trace = acgd::run_acgd(inst, L, f.r, f.max_phases, counters);
    } else {
      double r_bar = f.r_bar;
      if (!(r_bar > 0.0)) r_bar = meta ? acgd::norm(meta->lambda_star) + f.r : f.r;
      trace = acgd::run_acgd_s(inst, L, r_bar, f.delta, f.max_phases, counters).run;
    }
    records = trace.records;
    const acgd::PhaseRecord& last = records.back();
    sum.final_guess = L;
    sum.feas_norm = last.feas_norm;
    if (meta) {
      sum.gap = last.obj_gap;
    } else if (inst.domain().bounded() || inst.reg().alpha > 0.0) {
      const auto cert = trace.dual.lower_bound(inst.domain(), inst.reg(), 0.05 * f.eps, counters);
      sum.gap = last.objective - cert.f_under;
    } else {
      sum.gap = std::nan("");
    }
    sum.success = sum.feas_norm <= f.eps / f.c && sum.gap <= f.eps;
  }
  sum.oracle_calls = counters.oracle_calls;
  sum.matvecs = counters.matvecs;

  if (!f.trace.empty()) emit(f.trace, acgd::trace_to_csv(records));
  emit(f.summary, acgd::summary_to_json(sum));
  return sum.success ? kExitOk : kExitBudget;
}

int cmd_bench(const BenchFlags& f) {
  // Validate the suite name before touching the output directory.
  acgd::bench_suite(f.suite);
  const auto rows = acgd::run_bench(f.suite, f.out, acgd::bench_threads_from_env());
  std::cout << acgd::bench_table_csv(rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated constrained gradient descent toolkit"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "Write an instance file");
  g->add_option("--type", gen.type, "nonstrong_hard | strong_hard | random_qp")->required();
  g->add_option("--out", gen.out, "Output path (stdout when omitted)");
  g->add_option("--k", gen.k);
  g->add_option("--beta", gen.beta);
  g->add_option("--gamma", gen.gamma);
  g->add_option("--l", gen.l);
  g->add_option("--n", gen.n);
  g->add_option("--m", gen.m);
  g->add_option("--lbar-g", gen.lbar_g);
  g->add_option("--alpha", gen.alpha);
  g->add_option("--seed", gen.seed);
  g->add_option("--domain", gen.domain, "Override the domain: free | ball | box");
  g->add_option("--radius", gen.radius, "Ball radius (centered at the origin)");
  g->add_option("--lower", gen.lower, "Box lower bound, every coordinate");
  g->add_option("--upper", gen.upper, "Box upper bound, every coordinate");

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "Run ACGD or ACGD-S on an instance file");
  s->add_option("--instance", solve.instance)->required();
  s->add_option("--algo", solve.algo, "acgd | acgd-s");
  s->add_option("--eps", solve.eps);
  s->add_option("--c", solve.c);
  s->add_option("--r", solve.r);
  s->add_option("--rbar", solve.r_bar, "Multiplier radius for acgd-s with a fixed L");
  s->add_option("--delta", solve.delta, "Sliding parameter (default from the regime)");
  s->add_option("--L", solve.L, "Number, 'search' or 'meta'");
  s->add_option("--L0", solve.L0, "Initial guess for --L search");
  s->add_option("--max-phases", solve.max_phases);
  s->add_option("--max-doublings", solve.max_doublings);
  s->add_option("--trace", solve.trace, "Trace CSV path");
  s->add_option("--summary", solve.summary, "Summary JSON path (stdout when omitted)");

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark suite");
  b->add_option("--suite", bench.suite);
  b->add_option("--out", bench.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (s->parsed()) return cmd_solve(solve);
    return cmd_bench(bench);
  } catch (const acgd::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const acgd::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  }
}
