#pragma once

#include <string>
#include <vector>

#include "acgd/acgd.hpp"

namespace acgd {

// Inner-loop parameters of one sliding phase; arrays are indexed by s - 1.
struct InnerSchedule {
  long S = 1;
  double Gamma = 1.0;
  Vector delta;
  Vector beta;
  Vector gamma;
  Vector rho;
  double W_next = 0.0;   // strongly convex regime
  double M = 0.0;        // operator-norm bound of the phase Jacobian
  double M_tilde = 0.0;  // S / (Delta t), non-strongly convex regime
  bool degenerate = false;  // M = 0: no dual steps
};

// Inner loops longer than this raise BudgetExceeded.
inline constexpr long kMaxInnerIterations = 100000000;

// S = ceil(M Delta t), M_tilde = S / (Delta t), beta = M_tilde r_bar / R_hat,
// gamma = M_tilde^2 / beta, delta = 1, rho_1 = M_tilde / M_tilde_prev
// (1 when M_tilde_prev <= 0), rho_s = 1 otherwise.
InnerSchedule inner_schedule_nonstrong(int t, double M_t, double M_tilde_prev, double Delta,
                                       double r_bar, double R_hat);

// Strongly convex inner schedule. For t = 1, and for any phase entered with
// W_t <= 0 (every earlier phase had a zero Jacobian), S is the least integer
// with S(S+1)/2 >= w_t M^2 Delta. rho_1 is left at 1 and set by
// link_phases once the previous phase is known.
InnerSchedule inner_schedule_strong(int t, double M_t, double W_t, double w_t, double Delta,
                                    double alpha);

// rho_1 of `cur` from the aggregate weights of the last iteration of the
// previous phase and the first of the current one. theta = w_{t-1} / w_t.
void link_phases(const InnerSchedule& prev, InnerSchedule& cur, double theta);

// The part of the sliding requirements owned by phase t: intra-phase
// recurrences, the closing condition when `last`, and the link into `next`
// when given. Lets long schedules be checked one phase at a time.
void check_phase_conditions(const OuterSchedule& outer, int t, const InnerSchedule& cur,
                            const InnerSchedule* next, bool last, double alpha, double rel_slack,
                            std::vector<std::string>& out);

// Outer (with alpha/2), intra-phase and inter-phase stepsize requirements of
// the sliding analysis. inners[t-1] belongs to phase t.
std::vector<std::string> check_sliding_conditions(const OuterSchedule& outer,
                                                  const std::vector<InnerSchedule>& inners,
                                                  double alpha, double rel_slack = 1e-10);

struct AcgdSOptions {
  Vector x0;
  double R_hat = 0.0;  // <= 0: ||x0 - x*|| from metadata, else D_X, else 1
  int log_every = 1;
  long max_inner_total = 2000000000;
  bool keep_schedules = false;
  std::function<void(const PhaseRecord&, ConstSpan x_bar)> on_phase;
  // Checked on logged phases; returning true ends the run after that phase.
  std::function<bool(const PhaseRecord&)> stop_when;
};

struct SlidingTrace {
  RunTrace run;
  std::vector<InnerSchedule> inners;  // keep_schedules only
  double Delta = 0.0;
  double R_hat = 0.0;
};

// Default Delta for the regime: r_bar / (R_hat L) without strong convexity,
// r_bar^2 / (L R_hat^2 alpha) with it.
double default_delta(double L, double alpha, double r_bar, double R_hat);
double default_r_hat(const ProblemInstance& instance, ConstSpan x0);

// Delta <= 0 selects default_delta.
SlidingTrace run_acgd_s(const ProblemInstance& instance, double L, double r_bar, double Delta,
                        int N, CostCounters& counters, const AcgdSOptions& opts = {});

}  // namespace acgd
