#pragma once

#include <cstdint>
#include <string>

#include "acgd/oracle.hpp"

namespace acgd {

// Chain-structured hard instance without strong convexity, n = 2k + 1.
struct NonstrongHardParams {
  int k = 1;
  double beta = 1.0;
  double gamma = 1.0;
  double l = 1.0;
};

// Truncated strongly convex chain instance.
struct StrongHardParams {
  std::size_t n = 50;
  double Lbar_g = 1.0;
  double l = 1.0;
  double alpha = 0.25;
};

struct RandomQpParams {
  std::size_t n = 2;
  std::size_t m = 1;
  std::uint64_t seed = 0;
};

// f(x) = x'Qx/2 + c'x, g(x) = Ax - b, regularizer alpha ||x||^2 / 2.
struct QpData {
  Matrix Q;
  Vector c;
  Matrix A;
  Vector b;
  Domain domain = Domain::free(1);
  double alpha = 0.0;
};

// x'Tx with T = tridiag(-1, 2, -1), i.e. x_1^2 + sum (x_i - x_{i+1})^2 + x_n^2.
double chain_quadratic(ConstSpan x);
// T x.
Vector chain_apply(ConstSpan x);

ProblemInstance gen_nonstrong_hard(const NonstrongHardParams& p);
ProblemInstance gen_strong_hard(const StrongHardParams& p);
struct RandomQpDraw {
  QpData data;
  std::uint64_t seed = 0;  // the seed that produced the accepted draw
};

// Draws until the reference solve is well posed (at most 100 attempts with
// consecutive seeds).
RandomQpDraw random_qp_data(const RandomQpParams& p);
ProblemInstance gen_random_qp(const RandomQpParams& p);
// Wraps explicit QP data; attaches the enumerated reference optimum when
// with_reference is set and the solve succeeds.
ProblemInstance make_qp_instance(std::string name, const QpData& data, bool with_reference = true);

// min g_2 over the subspace of vectors supported on the first j coordinates.
double min_g2_over_span(const NonstrongHardParams& p, int j);

// L_f + (||lambda*|| + r) Lbar_g.
double aggregate_smoothness(const InstanceMeta& meta, double r);

// Largest eigenvalue of a symmetric matrix.
double max_eigenvalue(const Matrix& sym);

}  // namespace acgd
