#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acgd/oracle.hpp"
#include "acgd/subproblem.hpp"

namespace acgd {

// Outer stepsizes for t = 1..N, stored at index t - 1. Weights are kept as
// logarithms because they grow geometrically in the strongly convex regime.
struct OuterSchedule {
  double L = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;  // L / alpha, +inf when alpha = 0
  std::vector<double> tau;
  std::vector<double> eta;
  std::vector<double> theta;
  std::vector<double> log_w;

  int size() const { return static_cast<int>(tau.size()); }
  // log of sum_{t <= N} w_t.
  double log_weight_sum(int N) const;
};

// tau_t = min{(t-1)/2, sqrt(kappa)}, eta_t = L / tau_{t+1},
// theta_t = tau_t / (tau_{t-1} + 1), w_t = w_{t-1} / theta_t, w_1 = 1.
OuterSchedule build_schedule(double L, double alpha, int N);

// Returns one message per violated recurrence (empty when all hold):
//   w_t eta_t <= w_{t-1} (eta_{t-1} + alpha),  w_t tau_t <= w_{t-1} (tau_{t-1} + 1),
//   eta_{t-1} tau_t >= theta_t L  (theta_t = w_{t-1} / w_t),  eta_N (tau_N + 1) >= L.
std::vector<std::string> check_schedule_conditions(const OuterSchedule& s, double alpha, double L,
                                                   double rel_slack = 1e-12);

struct PhaseRecord {
  int t = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t matvecs = 0;
  double objective = 0.0;  // F at the ergodic average
  double obj_gap = 0.0;    // NaN when f_star is unknown
  double feas_norm = 0.0;  // ||[g(x_bar_t)]_+||
  double dist_sq = 0.0;    // NaN when x_star is unknown
  long S_t = 0;            // inner iterations (sliding only)
};

// Weighted dual data of a run. All sums are kept normalized by the running
// total weight W_t, which keeps them finite when w_t overflows a double.
struct DualAggregate {
  std::size_t n = 0;
  std::size_t m = 0;
  Vector pi_bar;      // sum w pi / W
  double f_const = 0.0;  // sum w (f(x_under) - <pi, x_under>) / W
  Matrix lam_nu;      // row i: sum w lam_i nu_i / W
  Vector lam_w;       // sum w lam_i / W
  Vector lam_const;   // sum w lam_i (g_i - <nu_i, x_under>) / W

  void reset(std::size_t n_, std::size_t m_);
  // ratio = w_t / W_t.
  void add(double ratio, const OracleSample& s, ConstSpan x_under, ConstSpan lam);

  // Certified lower bound on F* built from the aggregated linearizations.
  LowerBoundCertificate lower_bound(const Domain& domain, const Regularizer& reg, double tol,
                                    CostCounters& counters) const;
};

struct RunTrace {
  std::vector<PhaseRecord> records;
  Vector x_bar;
  Vector x_last;
  Vector lambda_last;
  DualAggregate dual;
  OuterSchedule schedule;
  int phases = 0;
  std::uint64_t inner_total = 0;
};

struct AcgdOptions {
  Vector x0;              // empty: projection of the origin onto X
  int log_every = 1;      // 0 logs the final phase only
  StepOptions step;
  std::function<void(const PhaseRecord&, ConstSpan x_bar)> on_phase;
  // Checked on logged phases; returning true ends the run after that phase.
  std::function<bool(const PhaseRecord&)> stop_when;
};

RunTrace run_acgd(const ProblemInstance& instance, double L, double r, int N,
                  CostCounters& counters, const AcgdOptions& opts = {});

namespace detail {
Vector default_start(const ProblemInstance& instance);
// Evaluates the uncounted trace fields of x_bar.
PhaseRecord make_record(const ProblemInstance& instance, int t, const CostCounters& c,
                        ConstSpan x_bar);
bool should_log(int t, int N, int every);
}  // namespace detail

}  // namespace acgd
