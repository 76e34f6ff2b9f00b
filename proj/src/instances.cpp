#include "acgd/instances.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "acgd/errors.hpp"
#include "acgd/qp_reference.hpp"

namespace acgd {
namespace {

// Solves (d I + e T) x = rhs for T = tridiag(-1, 2, -1) by the Thomas
// algorithm. The matrix is symmetric positive definite whenever d >= 0,
// e >= 0 and d + e > 0.
Vector chain_solve(double d, double e, ConstSpan rhs) {
  const std::size_t n = rhs.size();
  const double diag = d + 2.0 * e;
  const double off = -e;
  Vector cp(n, 0.0);
  Vector x(rhs.begin(), rhs.end());
  double denom = diag;
  cp[0] = off / denom;
  x[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag - off * cp[i - 1];
    cp[i] = off / denom;
    x[i] = (x[i] - off * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

}  // namespace

double chain_quadratic(ConstSpan x) {
  const std::size_t n = x.size();
  double s = x[0] * x[0] + x[n - 1] * x[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i] - x[i + 1];
    s += d * d;
  }
  return s;
}

Vector chain_apply(ConstSpan x) {
  const std::size_t n = x.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = 2.0 * x[i];
    if (i > 0) y[i] -= x[i - 1];
    if (i + 1 < n) y[i] -= x[i + 1];
  }
  return y;
}

ProblemInstance gen_nonstrong_hard(const NonstrongHardParams& p) {
  if (p.k < 1) throw InvalidArgument("nonstrong_hard requires k >= 1");
  if (!(p.beta > 0.0) || !(p.gamma > 0.0) || !(p.l > 0.0)) {
    throw InvalidArgument("nonstrong_hard requires beta, gamma, l > 0");
  }
  const std::size_t n = 2 * static_cast<std::size_t>(p.k) + 1;
  const double shift = (2.0 * p.k + 1.0) / (2.0 * p.k + 2.0) * p.gamma * p.gamma * p.beta;
  const double slope = 2.0 * p.l * p.gamma * p.beta;

  OracleFn oracle = [p, n, shift, slope](ConstSpan x) {
    OracleSample s;
    s.f_val = -slope * x[0];
    s.grad_f.assign(n, 0.0);
    s.grad_f[0] = -slope;
    const double q = chain_quadratic(x);
    const Vector tx = chain_apply(x);
    s.g_val = {p.beta * q - shift, p.beta * (q - 2.0 * p.gamma * x[0]) + shift};
    s.jac_g = Matrix(2, n);
    for (std::size_t i = 0; i < n; ++i) {
      s.jac_g(0, i) = 2.0 * p.beta * tx[i];
      s.jac_g(1, i) = 2.0 * p.beta * tx[i];
    }
    s.jac_g(1, 0) -= 2.0 * p.beta * p.gamma;
    return s;
  };

  InstanceMeta meta;
  meta.x_star.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    meta.x_star[i] = p.gamma * (1.0 - static_cast<double>(i + 1) / (2.0 * p.k + 2.0));
  }
  meta.lambda_star = {p.l, 0.0};
  meta.f_star = -slope * meta.x_star[0];
  meta.L_f = 0.0;
  meta.Lbar_g = 12.0 * p.beta;
  return ProblemInstance("nonstrong_hard", n, 2, std::move(oracle), Domain::free(n),
                         Regularizer{0.0}, std::move(meta));
}

ProblemInstance gen_strong_hard(const StrongHardParams& p) {
  if (p.n < 1) throw InvalidArgument("strong_hard requires n >= 1");
  if (!(p.Lbar_g > 0.0) || !(p.l > 0.0) || !(p.alpha > 0.0)) {
    throw InvalidArgument("strong_hard requires Lbar_g, l, alpha > 0");
  }
  if (p.alpha > p.Lbar_g * p.l) throw InvalidArgument("strong_hard requires alpha <= Lbar_g * l");
  const std::size_t n = p.n;
  const double beta = p.Lbar_g;
  const double gamma = p.alpha / (beta * p.l);
  const double delta = (1.0 - std::sqrt(gamma)) / (1.0 + std::sqrt(gamma));
  const double a = (p.l * beta - p.alpha) / 4.0;
  const double ch = (beta - p.alpha / p.l) / 8.0;

  Vector xbar(n);
  double pw = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    pw *= delta;
    xbar[i] = pw;
  }
  const double level = chain_quadratic(xbar);

  OracleFn oracle = [n, a, ch, level](ConstSpan x) {
    OracleSample s;
    s.f_val = -a * x[0];
    s.grad_f.assign(n, 0.0);
    s.grad_f[0] = -a;
    s.g_val = {ch * (chain_quadratic(x) - level)};
    const Vector tx = chain_apply(x);
    s.jac_g = Matrix(1, n);
    for (std::size_t i = 0; i < n; ++i) s.jac_g(0, i) = 2.0 * ch * tx[i];
    return s;
  };

  // Stationarity alpha x - a e1 + 2 lambda ch T x = 0 gives x(lambda) from a
  // tridiagonal solve; lambda is fixed by g(x(lambda)) = 0 when the
  // unconstrained minimizer is infeasible.
  Vector e1(n, 0.0);
  e1[0] = a;
  auto x_of = [&](double lam) { return chain_solve(p.alpha, 2.0 * lam * ch, e1); };
  auto g_of = [&](double lam) { return ch * (chain_quadratic(x_of(lam)) - level); };

  InstanceMeta meta;
  double lam_star = 0.0;
  if (ch == 0.0) {
    lam_star = p.l;
  } else if (g_of(0.0) > 0.0) {
    double lo = 0.0;
    double hi = std::max(1.0, p.l);
    while (g_of(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g_of(mid) > 0.0 ? lo : hi) = mid;
    }
    lam_star = hi;
  }
  meta.x_star = ch == 0.0 ? Vector(n, 0.0) : x_of(lam_star);
  meta.lambda_star = {lam_star};
  meta.f_star = -a * meta.x_star[0] + 0.5 * p.alpha * norm_sq(meta.x_star);
  meta.L_f = 0.0;
  meta.Lbar_g = p.Lbar_g;
  return ProblemInstance("strong_hard", n, 1, std::move(oracle), Domain::free(n),
                         Regularizer{p.alpha}, std::move(meta));
}

double max_eigenvalue(const Matrix& sym) {
  const auto n = static_cast<Eigen::Index>(sym.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = sym(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

ProblemInstance make_qp_instance(std::string name, const QpData& data, bool with_reference) {
  const std::size_t n = data.domain.dim();
  const std::size_t m = data.A.rows();
  require_same_dim(n, data.c.size(), "qp c");
  require_same_dim(m, data.b.size(), "qp b");
  if (m > 0) require_same_dim(n, data.A.cols(), "qp A");

  OracleFn oracle = [data, n, m](ConstSpan x) {
    OracleSample s;
    s.grad_f = data.c;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double qi = 0.0;
      for (std::size_t j = 0; j < n; ++j) qi += data.Q(i, j) * x[j];
      s.grad_f[i] += qi;
      quad += qi * x[i];
    }
    s.f_val = 0.5 * quad + dot(data.c, x);
    s.g_val.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.g_val[i] = dot(data.A.row(i), x) - data.b[i];
    s.jac_g = m > 0 ? data.A : Matrix(0, n);
    return s;
  };

  std::optional<InstanceMeta> meta;
  if (with_reference) {
    const QpSolution sol = solve_qp_reference(data);
    if (sol.found) {
      InstanceMeta mt;
      mt.x_star = sol.x;
      mt.lambda_star = sol.lambda;
      mt.f_star = sol.objective;
      mt.L_f = std::max(0.0, max_eigenvalue(data.Q));
      mt.Lbar_g = 0.0;
      if (data.domain.bounded()) mt.D_X = data.domain.diameter();
      meta = std::move(mt);
    }
  }
  return ProblemInstance(std::move(name), n, m, std::move(oracle), data.domain,
                         Regularizer{data.alpha}, std::move(meta));
}

RandomQpDraw random_qp_data(const RandomQpParams& p) {
  if (p.n < 1 || p.n > 6) throw InvalidArgument("random_qp requires 1 <= n <= 6");
  if (p.m > 3) throw InvalidArgument("random_qp requires m <= 3");
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t seed = p.seed + static_cast<std::uint64_t>(attempt);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    QpData qp;
    Matrix B(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      for (std::size_t j = 0; j < p.n; ++j) B(i, j) = normal(rng);
    }
    qp.Q = Matrix(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      for (std::size_t j = 0; j < p.n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < p.n; ++k) s += B(k, i) * B(k, j);
        qp.Q(i, j) = s / static_cast<double>(p.n);
      }
      qp.Q(i, i) += 0.5;
    }
    qp.c.resize(p.n);
    for (double& v : qp.c) v = 3.0 * normal(rng);

    Vector interior(p.n, 0.0);
    if (seed % 2 == 0) {
      Vector lo(p.n);
      Vector hi(p.n);
      for (std::size_t i = 0; i < p.n; ++i) {
        lo[i] = -(0.5 + unif(rng));
        hi[i] = 0.5 + unif(rng);
      }
      qp.domain = Domain::box(std::move(lo), std::move(hi));
    } else {
      Vector center(p.n);
      for (double& v : center) v = 0.3 * normal(rng);
      interior = center;
      qp.domain = Domain::ball(std::move(center), 1.0 + unif(rng));
    }
    qp.A = Matrix(p.m, p.n);
    qp.b.resize(p.m);
    for (std::size_t i = 0; i < p.m; ++i) {
      for (std::size_t j = 0; j < p.n; ++j) qp.A(i, j) = normal(rng);
      qp.b[i] = dot(qp.A.row(i), interior) + 0.1 + 0.5 * unif(rng);
    }
    qp.alpha = seed % 3 == 2 ? 0.5 : 0.0;

    const ProblemInstance inst = make_qp_instance("random_qp", qp, true);
    if (inst.meta() && inst.check_kkt().ok) return RandomQpDraw{std::move(qp), seed};
  }
  throw InvalidArgument("random_qp: no well-posed draw within 100 attempts");
}

ProblemInstance gen_random_qp(const RandomQpParams& p) {
  return make_qp_instance("random_qp", random_qp_data(p).data, true);
}

double min_g2_over_span(const NonstrongHardParams& p, int j) {
  const int n = 2 * p.k + 1;
  if (j < 1 || j > n) throw InvalidArgument("min_g2_over_span requires 1 <= j <= 2k+1");
  // g2 restricted to K_j is beta (x'T_j x - 2 gamma x_1) + const with T_j the
  // leading j x j block; stationarity is T_j x = gamma e_1.
  Vector rhs(static_cast<std::size_t>(j), 0.0);
  rhs[0] = p.gamma;
  const Vector x = chain_solve(0.0, 1.0, rhs);
  const double shift = (2.0 * p.k + 1.0) / (2.0 * p.k + 2.0) * p.gamma * p.gamma * p.beta;
  return p.beta * (chain_quadratic(x) - 2.0 * p.gamma * x[0]) + shift;
}

double aggregate_smoothness(const InstanceMeta& meta, double r) {
  return meta.L_f + (norm(meta.lambda_star) + r) * meta.Lbar_g;
}

}  // namespace acgd
