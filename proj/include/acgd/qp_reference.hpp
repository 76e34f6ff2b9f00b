#pragma once

// Brute-force reference solver for tiny strictly convex QPs. Enumerates
// every combination of active linear constraints and active domain faces,
// solves the resulting equality-constrained KKT system densely and keeps the
// candidate satisfying all KKT conditions. Exponential in n and m; intended
// for test fixtures with n <= 6, m <= 3.

#include "acgd/instances.hpp"

namespace acgd {

struct QpSolution {
  bool found = false;
  Vector x;
  Vector lambda;
  double objective = 0.0;
};

QpSolution solve_qp_reference(const QpData& qp, double tol = 1e-9);

}  // namespace acgd
