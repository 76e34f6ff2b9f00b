#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acgd/domain.hpp"
#include "acgd/errors.hpp"
#include "support.hpp"

using namespace acgd;

namespace {

void expect_vec_near(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

std::vector<Domain> sample_domains(std::size_t n) {
  Vector lo(n), hi(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = -0.5 - 0.1 * i;
    hi[i] = 0.7 + 0.2 * i;
    c[i] = 0.3 * std::cos(1.0 + i);
  }
  return {Domain::free(n), Domain::box(lo, hi), Domain::ball(c, 1.3)};
}

// Brute force: the best of many random points of X, used to confirm that the
// closed-form answers are minimizers.
Vector random_point_in(const Domain& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = d.dim();
  Vector x(n);
  if (const auto* box = std::get_if<Box>(&d.kind())) {
    for (std::size_t i = 0; i < n; ++i) x[i] = box->lower[i] + u(rng) * (box->upper[i] - box->lower[i]);
  } else if (const auto* ball = std::get_if<Ball>(&d.kind())) {
    Vector dir = acgd::testing::random_vector(rng, n);
    const double r = ball->radius * std::pow(u(rng), 1.0 / n) / norm(dir);
    for (std::size_t i = 0; i < n; ++i) x[i] = ball->center[i] + r * dir[i];
  } else {
    x = acgd::testing::random_vector(rng, n, 3.0);
  }
  return x;
}

TEST(Domain, ConstructionValidatesInvariants) {
  EXPECT_THROW(Domain::box({0.0, 1.0}, {1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(Domain::box({0.0}, {1.0, 2.0}), DimensionMismatch);
  EXPECT_THROW(Domain::ball({0.0}, 0.0), InvalidArgument);
  EXPECT_THROW(Domain::free(0), InvalidArgument);
}

TEST(Domain, DiameterAndMembership) {
  const Domain box = Domain::box({0.0, 0.0}, {3.0, 4.0});
  EXPECT_DOUBLE_EQ(box.diameter(), 5.0);
  EXPECT_TRUE(box.contains(Vector{3.0, 0.0}));
  EXPECT_FALSE(box.contains(Vector{3.1, 0.0}));
  const Domain ball = Domain::ball({1.0, 1.0}, 2.0);
  EXPECT_DOUBLE_EQ(ball.diameter(), 4.0);
  EXPECT_TRUE(ball.bounded());
  EXPECT_FALSE(Domain::free(2).bounded());
  EXPECT_TRUE(std::isinf(Domain::free(2).diameter()));
  EXPECT_EQ(ball.center(), (Vector{1.0, 1.0}));
  EXPECT_EQ(box.center(), (Vector{1.5, 2.0}));
}

TEST(Projection, TableExamples) {
  const Domain unit_box = Domain::box({0.0, 0.0}, {1.0, 1.0});
  EXPECT_EQ(euclidean_project(unit_box, Vector{0.5, 0.5}), (Vector{0.5, 0.5}));
  EXPECT_EQ(euclidean_project(unit_box, Vector{2.0, -1.0}), (Vector{1.0, 0.0}));
  expect_vec_near(euclidean_project(Domain::ball({0.0, 0.0}, 1.0), Vector{3.0, 4.0}), {0.6, 0.8},
                  1e-15);
}

TEST(Projection, DimensionMismatchThrows) {
  EXPECT_THROW(euclidean_project(Domain::free(2), Vector{1.0}), DimensionMismatch);
}

TEST(Projection, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1, 2, 5}) {
    for (const Domain& d : sample_domains(n)) {
      for (int rep = 0; rep < 200; ++rep) {
        const Vector y = acgd::testing::random_vector(rng, n, 3.0);
        const Vector z = acgd::testing::random_vector(rng, n, 3.0);
        const Vector py = euclidean_project(d, y);
        const Vector pz = euclidean_project(d, z);
        EXPECT_TRUE(d.contains(py));
        expect_vec_near(euclidean_project(d, py), py, 1e-12);
        EXPECT_LE(std::sqrt(dist_sq(py, pz)), std::sqrt(dist_sq(y, z)) + 1e-12);
      }
    }
  }
}

TEST(Projection, ProjectionBeatsRandomFeasiblePoints) {
  std::mt19937_64 rng(4);
  for (const Domain& d : sample_domains(3)) {
    const Vector y = acgd::testing::random_vector(rng, 3, 2.0);
    const double best = dist_sq(euclidean_project(d, y), y);
    for (int rep = 0; rep < 2000; ++rep) {
      EXPECT_LE(best, dist_sq(random_point_in(d, rng), y) + 1e-12);
    }
  }
}

TEST(XProjection, TableExamples) {
  expect_vec_near(x_projection(Domain::free(2), Regularizer{1.0}, Vector{-2.0, 0.0},
                               Vector{0.0, 0.0}, 1.0),
                  {1.0, 0.0}, 1e-15);
  const Vector xbar = {0.3, 0.6, 0.2};
  expect_vec_near(x_projection(Domain::box(Vector(3, 0.0), Vector(3, 1.0)), Regularizer{0.0},
                               Vector(3, 0.0), xbar, 2.5),
                  xbar, 1e-15);
  expect_vec_near(x_projection(Domain::ball({0.0, 0.0}, 1.0), Regularizer{1.0}, Vector{-8.0, 0.0},
                               Vector{0.0, 0.0}, 1.0),
                  {1.0, 0.0}, 1e-15);
}

TEST(XProjection, FreeSpaceWithoutCurvatureIsUnbounded) {
  EXPECT_THROW(x_projection(Domain::free(2), Regularizer{0.0}, Vector{1.0, 0.0}, Vector{0.0, 0.0}, 0.0),
               UnboundedSubproblem);
}

TEST(XProjection, LinearMinimizationOnBoundedSets) {
  const Vector y = {1.0, -2.0, 0.0};
  const Vector x = x_projection(Domain::box({-1.0, -1.0, -1.0}, {2.0, 2.0, 3.0}), Regularizer{0.0},
                                y, Vector(3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(x[0], -1.0);
  EXPECT_DOUBLE_EQ(x[1], 2.0);
  const Vector b = x_projection(Domain::ball({1.0, 0.0}, 2.0), Regularizer{0.0}, Vector{0.0, 3.0},
                                Vector(2, 0.0), 0.0);
  expect_vec_near(b, {1.0, -2.0}, 1e-15);
}

TEST(XProjection, FirstOrderOptimalityOnSampledPoints) {
  std::mt19937_64 rng(5);
  for (double alpha : {0.0, 0.7}) {
    for (const Domain& d : sample_domains(4)) {
      for (int rep = 0; rep < 30; ++rep) {
        const Vector y = acgd::testing::random_vector(rng, 4, 2.0);
        const Vector xbar = acgd::testing::random_vector(rng, 4);
        const double eta = 0.2 + rep * 0.1;
        const Vector xh = x_projection(d, Regularizer{alpha}, y, xbar, eta);
        Vector grad(4);
        for (std::size_t i = 0; i < 4; ++i) grad[i] = y[i] + alpha * xh[i] + eta * (xh[i] - xbar[i]);
        for (int s = 0; s < 50; ++s) {
          const Vector x = random_point_in(d, rng);
          EXPECT_GE(dot(grad, combine(1.0, x, -1.0, xh)), -1e-9);
        }
      }
    }
  }
}

TEST(XProjection, RadialInvarianceAroundTheOrigin) {
  std::mt19937_64 rng(6);
  for (const Domain& d : {Domain::free(3), Domain::ball(Vector(3, 0.0), 0.8)}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Vector y = acgd::testing::random_vector(rng, 3, 4.0);
      const Vector xh = x_projection(d, Regularizer{0.5}, y, Vector(3, 0.0), 1.5);
      const Vector stationary = scaled(-1.0 / 2.0, y);
      const double s = dot(xh, stationary) / norm_sq(stationary);
      EXPECT_GE(s, 0.0);
      expect_vec_near(xh, scaled(s, stationary), 1e-12);
    }
  }
}

}  // namespace
