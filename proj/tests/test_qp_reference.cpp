#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acgd/qp_reference.hpp"
#include "support.hpp"

using namespace acgd;

namespace {

QpData diagonal_qp(Vector q, Vector c, Domain d) {
  QpData qp;
  const std::size_t n = q.size();
  qp.Q = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) qp.Q(i, i) = q[i];
  qp.c = std::move(c);
  qp.A = Matrix(0, n);
  qp.domain = std::move(d);
  return qp;
}

TEST(QpReference, BoxClipOfSeparableProblem) {
  // min (x1 - 2)^2/2 + (x2 + 3)^2/2 over [0,1]^2 -> (1, 0).
  const QpData qp = diagonal_qp({1.0, 1.0}, {-2.0, 3.0}, Domain::box({0.0, 0.0}, {1.0, 1.0}));
  const QpSolution s = solve_qp_reference(qp);
  ASSERT_TRUE(s.found);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 0.0, 1e-12);
}

TEST(QpReference, BallActiveSolution) {
  // min ||x - (3,4)||^2 / 2 over the unit ball -> (0.6, 0.8).
  const QpData qp = diagonal_qp({1.0, 1.0}, {-3.0, -4.0}, Domain::ball({0.0, 0.0}, 1.0));
  const QpSolution s = solve_qp_reference(qp);
  ASSERT_TRUE(s.found);
  EXPECT_NEAR(s.x[0], 0.6, 1e-9);
  EXPECT_NEAR(s.x[1], 0.8, 1e-9);
}

TEST(QpReference, LinearConstraintWithMultiplier) {
  // min (x1^2 + x2^2)/2 s.t. x1 + x2 >= 2 -> x = (1,1), lambda = 1.
  QpData qp = diagonal_qp({1.0, 1.0}, {0.0, 0.0}, Domain::free(2));
  qp.A = Matrix(1, 2, -1.0);
  qp.b = {-2.0};
  const QpSolution s = solve_qp_reference(qp);
  ASSERT_TRUE(s.found);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.0, 1e-12);
  EXPECT_NEAR(s.lambda[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
}

TEST(QpReference, RegularizerEntersTheObjective) {
  QpData qp = diagonal_qp({1.0}, {-3.0}, Domain::free(1));
  qp.alpha = 2.0;  // (1 + 2) x - 3 = 0
  const QpSolution s = solve_qp_reference(qp);
  ASSERT_TRUE(s.found);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 0.5 * 3.0 - 3.0, 1e-12);
}

// The enumerated optimum must not be beaten by any sampled feasible point.
TEST(QpReference, NoSampledFeasiblePointIsBetter) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const QpData qp = random_qp_data({3, 2, seed}).data;
    const QpSolution s = solve_qp_reference(qp);
    ASSERT_TRUE(s.found);
    const acgd::testing::QpEval at = acgd::testing::evaluate_qp(qp, s.x);
    EXPECT_NEAR(at.F, s.objective, 1e-10);
    for (double g : at.g) EXPECT_LE(g, 1e-9);
    int feasible = 0;
    for (int rep = 0; rep < 4000; ++rep) {
      Vector x = acgd::testing::random_vector(rng, 3, 1.5);
      x = euclidean_project(qp.domain, x);
      const acgd::testing::QpEval e = acgd::testing::evaluate_qp(qp, x);
      bool ok = true;
      for (double g : e.g) ok = ok && g <= 0.0;
      if (!ok) continue;
      ++feasible;
      EXPECT_GE(e.F, s.objective - 1e-10);
    }
    EXPECT_GT(feasible, 0);
  }
}

TEST(QpReference, MultipliersSatisfyKkt) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QpData qp = random_qp_data({4, 3, seed}).data;
    const QpSolution s = solve_qp_reference(qp);
    ASSERT_TRUE(s.found);
    const acgd::testing::QpEval e = acgd::testing::evaluate_qp(qp, s.x);
    for (std::size_t i = 0; i < s.lambda.size(); ++i) {
      EXPECT_GE(s.lambda[i], -1e-12);
      EXPECT_NEAR(s.lambda[i] * e.g[i], 0.0, 1e-8);
    }
    // Lagrangian gradient must lie in the normal cone: the projected step
    // leaves x unchanged.
    Vector grad(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) grad[i] += qp.Q(i, j) * s.x[j];
      grad[i] += qp.c[i] + qp.alpha * s.x[i];
      for (std::size_t r = 0; r < s.lambda.size(); ++r) grad[i] += s.lambda[r] * qp.A(r, i);
    }
    const Vector moved = euclidean_project(qp.domain, combine(1.0, s.x, -0.1, grad));
    EXPECT_LE(std::sqrt(dist_sq(moved, s.x)), 1e-8) << seed;
  }
}

}  // namespace
