#pragma once

#include <vector>

#include "acgd/domain.hpp"
#include "acgd/oracle.hpp"

namespace acgd {

// One constrained descent step:
//   min_{x in X} <pi, x> + u(x) + (eta/2) ||x - x_prev||^2
//   s.t.  nu (x - x_under) + g_at_center <= 0.
struct StepInput {
  Vector pi;
  Matrix nu;
  Vector g_at_center;
  Vector x_under;
  Vector x_prev;
  double eta = 0.0;
  double tol = 0.0;     // <= 0 selects 1e-10 * max(1, ||pi||)
  Vector lambda_init;   // warm start; empty means zero
};

struct StepOptions {
  int max_iters = 200000;
  double lambda_cap = 1e8;
  // Active-set Newton polish on the dual. Disabling leaves the pure
  // accelerated projected gradient ascent.
  bool newton = true;
  bool record_restarts = false;
};

struct StepResult {
  Vector x;
  Vector lam;
  double kkt_residual = 0.0;
  int inner_iters = 0;
  // Dual objective at each momentum restart (record_restarts only).
  std::vector<double> restart_dual_values;
};

StepResult constrained_descent_step(const StepInput& in, const Domain& domain,
                                    const Regularizer& reg, CostCounters& counters,
                                    const StepOptions& opts = {});

struct LowerBoundCertificate {
  double f_under = 0.0;
  Vector dual_multiplier;  // one entry per row; zero on masked rows
  bool certified = false;
};

// Value of the Lagrangian dual of the linear relaxation
//   min_{x in X} <p, x> + f0 + u(x)  s.t.  R x + r0 <= 0   (rows with mask)
// at multiplier mu >= 0. Exact (closed form) for Box and Ball; a valid lower
// bound on the relaxation optimum for every mu >= 0.
double relaxation_dual_value(ConstSpan p, double f0, const Matrix& rows, ConstSpan consts,
                             const std::vector<bool>& mask, ConstSpan mu, const Domain& domain,
                             const Regularizer& reg, CostCounters& counters);

// Maximizes the dual above and reports the best value found. tol is the
// accuracy target for the bound itself; validity never depends on it.
LowerBoundCertificate certified_lower_bound(ConstSpan weighted_pi, double weighted_f_terms,
                                            const Matrix& per_constraint_rows,
                                            ConstSpan per_constraint_consts,
                                            const std::vector<bool>& active_mask,
                                            const Domain& domain, const Regularizer& reg,
                                            double tol, CostCounters& counters);

}  // namespace acgd
