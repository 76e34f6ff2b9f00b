#pragma once
// Fixture builders shared by the unit tests and the acceptance gate.

#include <cmath>
#include <cstdint>
#include <random>

#include "acgd/instances.hpp"
#include "acgd/qp_reference.hpp"
#include "acgd/subproblem.hpp"

namespace acgd::testing {

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = normal(rng);
  }
  return a;
}

// A constrained descent step with a strictly feasible linearization, plus the
// same problem written as an explicit QP for the enumeration reference.
struct StepFixture {
  StepInput input;
  Domain domain = Domain::free(1);
  Regularizer reg;
  QpData as_qp;
};

inline StepFixture make_step_fixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = 2 + seed % 4;
  const std::size_t m = std::min<std::size_t>(1 + seed % 3, n);

  StepFixture fx;
  switch (seed % 3) {
    case 0: {
      Vector lo(n), hi(n);
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = -0.3 - unif(rng);
        hi[i] = 0.3 + unif(rng);
      }
      fx.domain = Domain::box(lo, hi);
      break;
    }
    case 1:
      fx.domain = Domain::ball(random_vector(rng, n, 0.3), 0.5 + unif(rng));
      break;
    default:
      fx.domain = Domain::free(n);
      break;
  }
  fx.reg.alpha = seed % 2 == 0 ? 0.0 : 0.3;

  StepInput& in = fx.input;
  in.pi = random_vector(rng, n, 3.0);
  in.nu = random_matrix(rng, m, n);
  in.x_under = random_vector(rng, n);
  in.x_prev = random_vector(rng, n, 0.5);
  in.eta = 0.5 + 4.5 * unif(rng);
  in.tol = 1e-12;
  // Strict feasibility at the domain center.
  const Vector xc = fx.domain.center();
  in.g_at_center.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double nu_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) nu_d += in.nu(i, j) * (xc[j] - in.x_under[j]);
    in.g_at_center[i] = -nu_d - 0.1 - 0.5 * unif(rng);
  }

  QpData& qp = fx.as_qp;
  const double w = in.eta + fx.reg.alpha;
  qp.Q = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) qp.Q(i, i) = w;
  qp.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) qp.c[i] = in.pi[i] - in.eta * in.x_prev[i];
  qp.A = in.nu;
  qp.b.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += in.nu(i, j) * in.x_under[j];
    qp.b[i] = v - in.g_at_center[i];
  }
  qp.domain = fx.domain;
  qp.alpha = 0.0;
  return fx;
}

// F and g of a QP evaluated with plain loops, independent of the oracle code.
struct QpEval {
  double F = 0.0;
  Vector g;
};

inline QpEval evaluate_qp(const QpData& qp, ConstSpan x) {
  const std::size_t n = x.size();
  QpEval e;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += qp.Q(i, j) * x[j];
    e.F += 0.5 * x[i] * row + qp.c[i] * x[i] + 0.5 * qp.alpha * x[i] * x[i];
  }
  e.g.assign(qp.A.rows(), 0.0);
  for (std::size_t r = 0; r < qp.A.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) e.g[r] += qp.A(r, j) * x[j];
    e.g[r] -= qp.b[r];
  }
  return e;
}

}  // namespace acgd::testing
