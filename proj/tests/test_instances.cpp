#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acgd/errors.hpp"
#include "acgd/instances.hpp"
#include "support.hpp"

using namespace acgd;

namespace {

TEST(NonstrongHard, OptimumForSmallestChain) {
  const ProblemInstance inst = gen_nonstrong_hard({1, 1.0, 1.0, 2.0});
  ASSERT_TRUE(inst.meta());
  const InstanceMeta& m = *inst.meta();
  EXPECT_EQ(inst.dim(), 3u);
  EXPECT_DOUBLE_EQ(m.x_star[0], 0.75);
  EXPECT_DOUBLE_EQ(m.x_star[1], 0.5);
  EXPECT_DOUBLE_EQ(m.x_star[2], 0.25);
  EXPECT_EQ(m.lambda_star, (Vector{2.0, 0.0}));
  EXPECT_DOUBLE_EQ(m.f_star, -3.0);
  EXPECT_DOUBLE_EQ(m.Lbar_g, 12.0);
  const OracleSample s = inst.peek(m.x_star);
  EXPECT_NEAR(s.g_val[0], 0.0, 1e-15);
  EXPECT_NEAR(s.g_val[1], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.f_val, -3.0);
}

TEST(NonstrongHard, OptimumFormulaAcrossSizes) {
  for (int k : {2, 5, 10}) {
    const NonstrongHardParams p{k, 1.5, 0.8, 3.0};
    const ProblemInstance inst = gen_nonstrong_hard(p);
    EXPECT_EQ(inst.dim(), static_cast<std::size_t>(2 * k + 1));
    for (int i = 1; i <= 2 * k + 1; ++i) {
      EXPECT_NEAR(inst.meta()->x_star[i - 1], p.gamma * (1.0 - i / (2.0 * k + 2.0)), 1e-15);
    }
    EXPECT_TRUE(inst.check_kkt().ok);
  }
}

TEST(NonstrongHard, RejectsInvalidParameters) {
  EXPECT_THROW(gen_nonstrong_hard({0, 1.0, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(gen_nonstrong_hard({1, -1.0, 1.0, 1.0}), InvalidArgument);
}

TEST(StrongHard, ChainRatioAndTruncatedPoint) {
  const ProblemInstance inst = gen_strong_hard({50, 1.0, 1.0, 0.25});
  const double delta = 1.0 / 3.0;
  const InstanceMeta& m = *inst.meta();
  // Tail mass beyond coordinate 50 is below 1e-45, so the finite optimum
  // reproduces delta^i up to rounding.
  double pw = 1.0;
  for (std::size_t i = 0; i < 50; ++i) {
    pw *= delta;
    EXPECT_NEAR(m.x_star[i], pw, 1e-15) << "coordinate " << i + 1;
  }
  EXPECT_NEAR(inst.peek(m.x_star).g_val[0], 0.0, 1e-14);
  EXPECT_GT(m.lambda_star[0], 0.0);
  EXPECT_TRUE(inst.check_kkt().ok);
}

TEST(StrongHard, StationarityCheckedIndependently) {
  const StrongHardParams p{20, 2.0, 1.5, 0.6};
  const ProblemInstance inst = gen_strong_hard(p);
  const InstanceMeta& m = *inst.meta();
  const double a = (p.l * p.Lbar_g - p.alpha) / 4.0;
  const double ch = (p.Lbar_g - p.alpha / p.l) / 8.0;
  const Vector tx = chain_apply(m.x_star);
  for (std::size_t i = 0; i < p.n; ++i) {
    const double grad = (i == 0 ? -a : 0.0) + p.alpha * m.x_star[i] + m.lambda_star[0] * 2.0 * ch * tx[i];
    EXPECT_NEAR(grad, 0.0, 1e-10) << i;
  }
}

TEST(StrongHard, DegenerateChainHasOriginAsOptimum) {
  const ProblemInstance inst = gen_strong_hard({10, 2.0, 1.0, 2.0});
  EXPECT_EQ(inst.meta()->x_star, Vector(10, 0.0));
  EXPECT_TRUE(inst.check_kkt().ok);
}

TEST(StrongHard, RejectsTooMuchCurvature) {
  EXPECT_THROW(gen_strong_hard({5, 1.0, 1.0, 2.0}), InvalidArgument);
}

TEST(StrongHard, ConstraintGradientLipschitzWithinMetadata) {
  std::mt19937_64 rng(21);
  for (const StrongHardParams& p : {StrongHardParams{30, 1.0, 1.0, 0.25},
                                    StrongHardParams{12, 3.0, 2.0, 0.5}}) {
    const ProblemInstance inst = gen_strong_hard(p);
    double worst = 0.0;
    for (int rep = 0; rep < 300; ++rep) {
      const Vector x = acgd::testing::random_vector(rng, p.n);
      const Vector y = acgd::testing::random_vector(rng, p.n);
      const OracleSample sx = inst.peek(x);
      const OracleSample sy = inst.peek(y);
      const Vector gx(sx.jac_g.row(0).begin(), sx.jac_g.row(0).end());
      const Vector gy(sy.jac_g.row(0).begin(), sy.jac_g.row(0).end());
      worst = std::max(worst, std::sqrt(dist_sq(gx, gy) / dist_sq(x, y)));
    }
    EXPECT_LE(worst, p.Lbar_g + 1e-6);
  }
}

TEST(RandomQp, HandSolvedOneDimensionalProblems) {
  QpData qp;
  qp.Q = Matrix::identity(1);
  qp.c = {0.0};
  qp.A = Matrix(1, 1, -1.0);
  qp.b = {-1.0};  // g = 1 - x
  qp.domain = Domain::free(1);
  const ProblemInstance active = make_qp_instance("qp", qp);
  ASSERT_TRUE(active.meta());
  EXPECT_NEAR(active.meta()->x_star[0], 1.0, 1e-12);
  EXPECT_NEAR(active.meta()->lambda_star[0], 1.0, 1e-12);

  qp.b = {1.0};  // g = -1 - x, slack at x = 0
  const ProblemInstance slack = make_qp_instance("qp", qp);
  EXPECT_NEAR(slack.meta()->x_star[0], 0.0, 1e-12);
  EXPECT_EQ(slack.meta()->lambda_star[0], 0.0);
}

TEST(RandomQp, DeterministicGivenSeed) {
  const RandomQpDraw a = random_qp_data({4, 2, 42});
  const RandomQpDraw b = random_qp_data({4, 2, 42});
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.data.Q, b.data.Q);
  EXPECT_EQ(a.data.c, b.data.c);
  EXPECT_EQ(a.data.A, b.data.A);
  EXPECT_EQ(a.data.b, b.data.b);
  EXPECT_TRUE(a.data.domain == b.data.domain);
  EXPECT_EQ(gen_random_qp({4, 2, 42}).meta()->x_star, gen_random_qp({4, 2, 42}).meta()->x_star);
}

TEST(RandomQp, EveryDrawPassesKkt) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ProblemInstance inst = gen_random_qp({1 + seed % 6, seed % 4, seed});
    ASSERT_TRUE(inst.meta()) << seed;
    EXPECT_TRUE(inst.check_kkt().ok) << seed;
    EXPECT_TRUE(inst.domain().bounded());
  }
}

TEST(RandomQp, RejectsOversizedRequests) {
  EXPECT_THROW(gen_random_qp({7, 1, 0}), InvalidArgument);
  EXPECT_THROW(gen_random_qp({2, 4, 0}), InvalidArgument);
}

TEST(SpanFloor, SmallestChainEqualsFloor) {
  EXPECT_NEAR(min_g2_over_span({1, 1.0, 1.0, 2.0}, 1), 0.25, 1e-15);
}

TEST(SpanFloor, FullSpaceMinimumIsFeasible) {
  for (int k : {1, 3, 6}) {
    const NonstrongHardParams p{k, 1.0, 1.0, 1.0};
    EXPECT_LE(min_g2_over_span(p, 2 * k + 1), 1e-12);
  }
}

TEST(SpanFloor, FloorHoldsBelowTheMiddle) {
  for (int k = 1; k <= 6; ++k) {
    for (double beta : {0.5, 2.0}) {
      for (double gamma : {0.5, 2.0}) {
        const NonstrongHardParams p{k, beta, gamma, 1.0};
        for (int j = 1; j <= k; ++j) {
          EXPECT_GE(min_g2_over_span(p, j), beta * gamma * gamma / (2.0 * k + 2.0) - 1e-10);
        }
      }
    }
  }
  EXPECT_THROW(min_g2_over_span({1, 1.0, 1.0, 1.0}, 4), InvalidArgument);
}

TEST(SpanFloor, MatchesDenseMinimization) {
  // Independent route: minimize g_2 over K_j by solving the dense normal
  // equations with Gaussian elimination.
  const NonstrongHardParams p{3, 1.3, 0.7, 1.0};
  for (int j = 1; j <= 7; ++j) {
    std::vector<std::vector<double>> a(j, std::vector<double>(j + 1, 0.0));
    for (int i = 0; i < j; ++i) {
      a[i][i] = 2.0;
      if (i > 0) a[i][i - 1] = -1.0;
      if (i + 1 < j) a[i][i + 1] = -1.0;
    }
    a[0][j] = p.gamma;
    for (int c = 0; c < j; ++c) {
      for (int r = c + 1; r < j; ++r) {
        const double f = a[r][c] / a[c][c];
        for (int q = c; q <= j; ++q) a[r][q] -= f * a[c][q];
      }
    }
    Vector x(7, 0.0);
    for (int r = j - 1; r >= 0; --r) {
      double s = a[r][j];
      for (int q = r + 1; q < j; ++q) s -= a[r][q] * x[q];
      x[r] = s / a[r][r];
    }
    const double shift = 7.0 / 8.0 * p.gamma * p.gamma * p.beta;
    const double expected = p.beta * (chain_quadratic(x) - 2.0 * p.gamma * x[0]) + shift;
    EXPECT_NEAR(min_g2_over_span(p, j), expected, 1e-12) << j;
  }
}

TEST(Smoothness, AggregateConstant) {
  InstanceMeta m;
  m.L_f = 2.0;
  m.Lbar_g = 3.0;
  m.lambda_star = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(aggregate_smoothness(m, 1.0), 2.0 + 6.0 * 3.0);
}

TEST(Numerics, PowerBoundOnGrid) {
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.1 * i;
    for (double y = 1.0; y <= 2.0 * x; y += 0.05) {
      EXPECT_LE(std::pow(1.0 + 1.0 / x, y - 3.0), y * (1.0 + 1e-12)) << x << " " << y;
    }
  }
}

}  // namespace
