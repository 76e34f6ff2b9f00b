#include "acgd/search.hpp"

#include <cmath>
#include <limits>

#include "acgd/errors.hpp"

namespace acgd {
namespace {

double domain_radius(const ProblemInstance& instance, const SearchConfig& cfg) {
  if (cfg.D_X > 0.0) return cfg.D_X;
  if (!instance.domain().bounded()) {
    throw InvalidArgument("search requires a bounded domain or an explicit D_X");
  }
  return instance.domain().diameter();
}

int to_phase_count(double v) {
  if (!(v < 1e9)) throw BudgetExceeded("iteration limit exceeds the supported maximum");
  return std::max(1, static_cast<int>(std::ceil(v)));
}

}  // namespace

int iteration_limit(double guess, const SearchConfig& cfg) {
  if (!(guess > 0.0)) throw InvalidArgument("iteration_limit requires a positive guess");
  if (!(cfg.eps > 0.0)) throw InvalidArgument("iteration_limit requires eps > 0");
  const double D = cfg.D_X;
  const double a = cfg.alpha;
  if (cfg.method == Method::Acgd) {
    if (a <= 0.0) return to_phase_count(std::sqrt(2.0 * guess / cfg.eps) * D);
    const double lg = std::log(std::max(cfg.c, 1.0) * std::sqrt(guess * a) * D * D / cfg.eps + 1.0);
    return to_phase_count((std::sqrt(guess / a) + 1.0) * lg) + 4;
  }
  if (a <= 0.0) return to_phase_count(std::sqrt(3.0 * guess / cfg.eps) * D);
  const double lg =
      std::log(3.0 * std::max(cfg.c / cfg.r, 1.0) * std::sqrt(guess * a) * D * D / cfg.eps + 1.0);
  return to_phase_count((std::sqrt(2.0 * guess / a) + 1.0) * lg) + 4;
}

double search_budget_nonstrong(double L, double L0, double eps, double D_X) {
  const double doublings = L > L0 ? std::ceil(std::log2(L / L0)) : 0.0;
  return std::max(7.0 * std::sqrt(L / eps) * D_X + doublings, std::sqrt(2.0 * L0 / eps) * D_X + 1.0);
}

double search_budget_strong(double L, double L0, double alpha, double c, double eps, double D_X) {
  const double cc = std::max(c, 1.0);
  const double doublings = L > L0 ? std::ceil(std::log2(L / L0)) : 0.0;
  const double first =
      9.0 * std::sqrt(L / alpha) * std::log(cc * std::sqrt(2.0 * L * alpha) * D_X * D_X / eps + 1.0) +
      5.0 * doublings;
  const double second =
      std::ceil((std::sqrt(L0 / alpha) + 1.0) * std::log(cc * std::sqrt(L0 * alpha) * D_X * D_X / eps + 1.0)) +
      4.0;
  return std::max(first, second);
}

TerminationResult termination_check(ConstSpan x_bar, const ProblemInstance& instance,
                                    const DualAggregate& dual, const SearchConfig& cfg,
                                    CostCounters& counters) {
  TerminationResult r;
  const OracleSample s = instance.evaluate(x_bar, counters);
  r.feas_norm = positive_part_norm(s.g_val);
  r.objective = s.f_val + instance.reg().value(x_bar);
  const LowerBoundCertificate cert = dual.lower_bound(
      instance.domain(), instance.reg(), cfg.certificate_accuracy * cfg.eps, counters);
  r.f_under = cert.f_under;
  r.gap = r.objective - r.f_under;
  r.pass = r.feas_norm <= cfg.eps / cfg.c && r.gap <= cfg.eps;
  return r;
}

SearchReport run_search(const ProblemInstance& instance, const SearchConfig& cfg_in,
                        CostCounters& counters) {
  if (!(cfg_in.eps > 0.0)) throw InvalidArgument("search requires eps > 0");
  if (!(cfg_in.c >= 1.0)) throw InvalidArgument("search requires c >= 1");
  if (!(cfg_in.r > 0.0)) throw InvalidArgument("search requires r > 0");
  if (!(cfg_in.initial_guess > 0.0)) throw InvalidArgument("search requires a positive guess");
  SearchConfig cfg = cfg_in;
  cfg.D_X = domain_radius(instance, cfg);
  cfg.alpha = instance.reg().alpha;

  SearchReport rep;
  Vector x = cfg.x0.empty() ? detail::default_start(instance) : cfg.x0;
  double guess = cfg.initial_guess;
  for (int j = 0; j <= cfg.max_doublings; ++j) {
    RoundInfo round;
    round.guess = guess;
    round.N = iteration_limit(guess, cfg);
    RunTrace trace;
    if (cfg.method == Method::Acgd) {
      AcgdOptions o;
      o.x0 = x;
      o.log_every = cfg.log_every;
      o.step = cfg.step;
      trace = run_acgd(instance, guess, cfg.r, round.N, counters, o);
    } else {
      AcgdSOptions o;
      o.x0 = x;
      o.log_every = cfg.log_every;
      o.R_hat = cfg.D_X;
      trace = run_acgd_s(instance, guess, guess, 0.0, round.N, counters, o).run;
    }
    rep.total_iterations += round.N;
    x = trace.x_bar;
    round.check = termination_check(x, instance, trace.dual, cfg, counters);
    round.oracle_calls = counters.oracle_calls;
    round.matvecs = counters.matvecs;
    round.records = std::move(trace.records);
    rep.rounds.push_back(std::move(round));
    rep.final_guess = guess;
    rep.doublings_used = j;
    rep.certificate = rep.rounds.back().check;
    if (rep.certificate.pass) {
      rep.success = true;
      break;
    }
    guess *= 2.0;
  }
  rep.solution = std::move(x);
  rep.total_oracle_calls = counters.oracle_calls;
  rep.total_matvecs = counters.matvecs;
  return rep;
}

}  // namespace acgd
