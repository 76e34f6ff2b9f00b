#pragma once

#include <vector>

#include "acgd/acgd.hpp"
#include "acgd/acgd_s.hpp"

namespace acgd {

enum class Method { Acgd, AcgdS };

struct SearchConfig {
  double eps = 1e-3;
  double c = 1.0;
  double r = 1.0;
  double D_X = 0.0;  // <= 0: diameter of the instance domain
  double alpha = 0.0;
  double initial_guess = 1.0;
  Method method = Method::Acgd;
  int max_doublings = 40;
  Vector x0;
  // Accuracy of the lower-bound computation relative to eps.
  double certificate_accuracy = 0.05;
  int log_every = 0;  // per-round trace density, as in the solver options
  StepOptions step;
};

struct TerminationResult {
  bool pass = false;
  double f_under = 0.0;
  double feas_norm = 0.0;
  double objective = 0.0;
  double gap = 0.0;  // objective - f_under
};

struct RoundInfo {
  double guess = 0.0;
  int N = 0;
  std::uint64_t oracle_calls = 0;  // cumulative after the round's check
  std::uint64_t matvecs = 0;
  TerminationResult check;
  std::vector<PhaseRecord> records;
};

struct SearchReport {
  bool success = false;
  Vector solution;
  std::uint64_t total_oracle_calls = 0;
  std::uint64_t total_matvecs = 0;
  long total_iterations = 0;  // phases summed over rounds
  int doublings_used = 0;
  double final_guess = 0.0;
  std::vector<RoundInfo> rounds;
  TerminationResult certificate;
};

// Phase budget N(guess) for the configured method and regime.
int iteration_limit(double guess, const SearchConfig& cfg);

// Total-iteration bound of the doubling search without strong convexity,
// max{7 sqrt(L/eps) D_X + ceil(log2(L / L0)), sqrt(2 L0 / eps) D_X + 1}.
double search_budget_nonstrong(double L, double L0, double eps, double D_X);

// The same bound with strong convexity, evaluated at L = L(Lambda_1):
// max{9 sqrt(L/alpha) log(c' sqrt(2 L alpha) D_X^2 / eps + 1) + 5 ceil(log2(L / L0)),
//     N(L0)} with c' = max{c, 1}.
double search_budget_strong(double L, double L0, double alpha, double c, double eps, double D_X);

// One counted oracle call at x_bar plus the lower-bound computation.
TerminationResult termination_check(ConstSpan x_bar, const ProblemInstance& instance,
                                    const DualAggregate& dual, const SearchConfig& cfg,
                                    CostCounters& counters);

SearchReport run_search(const ProblemInstance& instance, const SearchConfig& cfg,
                        CostCounters& counters);

}  // namespace acgd
