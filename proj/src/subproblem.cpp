#include "acgd/subproblem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "acgd/errors.hpp"

namespace acgd {
namespace {

struct DualPoint {
  Vector lam;
  Vector z;  // unprojected primal minimizer
  Vector x;  // x(lam)
  Vector c;  // linearized constraint values at x
  double value = -std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

// Dual of  min_{x in X} <pi, x> + u(x) + (eta/2)||x - xp||^2  s.t.  nu x + b <= 0
// for eta + alpha > 0. For fixed lam the inner minimizer is the Euclidean
// projection of (eta xp - pi - nu^T lam) / (eta + alpha).
class DualProblem {
 public:
  DualProblem(ConstSpan pi, const Matrix& nu, Vector b, ConstSpan xp, double eta,
              const Domain& domain, const Regularizer& reg, CostCounters& counters)
      : pi_(pi), nu_(nu), b_(std::move(b)), xp_(xp), eta_(eta), domain_(domain), reg_(reg),
        counters_(counters), weight_(eta + reg.alpha), h_(pi.size()), frob_(frobenius_norm(nu)) {
    if (!(weight_ > 0.0)) throw InvalidArgument("dual ascent requires eta + alpha > 0");
    b_scale_ = 0.0;
    for (double v : b_) b_scale_ = std::max(b_scale_, std::abs(v));
  }

  std::size_t m() const { return b_.size(); }
  std::size_t n() const { return pi_.size(); }
  double weight() const { return weight_; }
  double frobenius() const { return frob_; }

  void evaluate(ConstSpan lam, DualPoint& out) {
    const std::size_t n = this->n();
    out.lam.assign(lam.begin(), lam.end());
    jac_apply_t_into(nu_, lam, h_, counters_);
    out.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double anchor = xp_.empty() ? 0.0 : eta_ * xp_[i];
      out.z[i] = (anchor - pi_[i] - h_[i]) / weight_;
    }
    out.x.resize(n);
    euclidean_project_into(domain_, out.z, out.x);
    out.c.resize(m());
    jac_apply_into(nu_, out.x, out.c, counters_);
    double infeas = 0.0;
    double slack = 0.0;
    double lam_c = 0.0;
    for (std::size_t i = 0; i < m(); ++i) {
      out.c[i] += b_[i];
      infeas = std::max(infeas, out.c[i]);
      slack += lam[i] * std::abs(out.c[i]);
      lam_c += lam[i] * out.c[i];
    }
    out.residual = std::max(infeas, slack);
    double prox = 0.0;
    if (!xp_.empty() && eta_ > 0.0) prox = 0.5 * eta_ * dist_sq(out.x, xp_);
    out.value = dot(pi_, out.x) + reg_.value(out.x) + prox + lam_c;
  }

  // Rounding floor of the residual at this point; tolerances below it are
  // unattainable in double precision.
  double noise_floor(const DualPoint& p) const {
    double l1 = 0.0;
    for (double v : p.lam) l1 += v;
    return 1e-14 * (1.0 + l1) * (frob_ * norm(p.x) + b_scale_ + 1.0);
  }

  // Generalized Jacobian of the projection at z applied to q.
  void apply_projection_jacobian(const DualPoint& p, ConstSpan q, MutSpan out) const {
    const std::size_t n = this->n();
    if (const auto* box = std::get_if<Box>(&domain_.kind())) {
      (void)box;
      for (std::size_t i = 0; i < n; ++i) out[i] = p.x[i] == p.z[i] ? q[i] : 0.0;
    } else if (const auto* ball = std::get_if<Ball>(&domain_.kind())) {
      Vector v = combine(1.0, p.z, -1.0, ball->center);
      const double d = norm(v);
      if (d <= ball->radius) {
        std::copy(q.begin(), q.end(), out.begin());
      } else {
        const double uq = dot(v, q) / (d * d);
        const double s = ball->radius / d;
        for (std::size_t i = 0; i < n; ++i) out[i] = s * (q[i] - uq * v[i]);
      }
    } else {
      std::copy(q.begin(), q.end(), out.begin());
    }
  }

  // Active-set Newton direction for the dual optimality system at p. Returns
  // the full step d with lam + d the (unclipped) Newton point.
  bool newton_direction(const DualPoint& p, Vector& d) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < m(); ++i) {
      if (p.lam[i] > 0.0 || p.c[i] > 0.0) act.push_back(i);
    }
    d.assign(m(), 0.0);
    for (std::size_t i = 0; i < m(); ++i) d[i] = -p.lam[i];
    if (act.empty()) return true;
    const auto k = static_cast<Eigen::Index>(act.size());
    Eigen::MatrixXd H(k, k);
    Eigen::VectorXd rhs(k);
    Vector q(n());
    Vector col(m());
    for (Eigen::Index j = 0; j < k; ++j) {
      apply_projection_jacobian(p, nu_.row(act[j]), q);
      jac_apply_into(nu_, q, col, counters_);
      for (Eigen::Index i = 0; i < k; ++i) H(i, j) = col[act[i]] / weight_;
      rhs(j) = p.c[act[j]];
    }
    const double scale = H.diagonal().cwiseAbs().maxCoeff();
    H.diagonal().array() += 1e-13 * scale + 1e-300;
    const Eigen::VectorXd step = H.ldlt().solve(rhs);
    if (!step.allFinite()) return false;
    for (Eigen::Index j = 0; j < k; ++j) d[act[j]] = step(j);
    return true;
  }

 private:
  ConstSpan pi_;
  const Matrix& nu_;
  Vector b_;
  ConstSpan xp_;
  double eta_;
  const Domain& domain_;
  const Regularizer& reg_;
  CostCounters& counters_;
  double weight_;
  Vector h_;
  double frob_;
  double b_scale_ = 0.0;
};

struct SolveOutcome {
  DualPoint point;
  int iters = 0;
  std::vector<double> restarts;
};

// Maximizes the dual to residual <= tol. Throws InfeasibleStep or
// ToleranceNotReached.
SolveOutcome solve_dual(DualProblem& dp, ConstSpan lam0, double tol, const StepOptions& opts) {
  const std::size_t m = dp.m();
  SolveOutcome out;
  Vector lam(m, 0.0);
  for (std::size_t i = 0; i < m && i < lam0.size(); ++i) lam[i] = std::max(lam0[i], 0.0);

  DualPoint cur;
  dp.evaluate(lam, cur);
  DualPoint best = cur;
  auto converged = [&](const DualPoint& p) {
    return p.residual <= std::max(tol, dp.noise_floor(p));
  };
  auto note = [&](const DualPoint& p) {
    if (p.residual < best.residual) best = p;
  };
  auto check_cap = [&](const DualPoint& p) {
    if (norm(p.lam) > opts.lambda_cap) {
      throw InfeasibleStep("linearized constraints appear infeasible (multiplier norm exceeded cap)");
    }
  };
  const double lip = std::max(dp.frobenius() * dp.frobenius() / dp.weight(), 1e-300);

  int iters = 0;
  int chunk = 100;
  while (true) {
    if (converged(cur)) {
      out.point = std::move(cur);
      out.iters = iters;
      return out;
    }
    if (iters >= opts.max_iters) break;

    if (opts.newton) {
      for (int k = 0; k < 50 && iters < opts.max_iters; ++k) {
        Vector d;
        if (!dp.newton_direction(cur, d)) break;
        bool accepted = false;
        double s = 1.0;
        for (int ls = 0; ls < 30; ++ls, s *= 0.5) {
          Vector trial(m);
          for (std::size_t i = 0; i < m; ++i) trial[i] = std::max(cur.lam[i] + s * d[i], 0.0);
          DualPoint cand;
          dp.evaluate(trial, cand);
          ++iters;
          note(cand);
          if (cand.residual < cur.residual) {
            check_cap(cand);
            cur = std::move(cand);
            accepted = true;
            break;
          }
        }
        if (!accepted || converged(cur)) break;
      }
      if (converged(cur)) continue;
    }

    // Accelerated projected gradient ascent with function-value restart, so
    // the dual value never decreases across accepted iterates.
    Vector y = cur.lam;
    double t = 1.0;
    for (int k = 0; k < chunk && iters < opts.max_iters; ++k) {
      DualPoint at_y;
      dp.evaluate(y, at_y);
      Vector z(m);
      for (std::size_t i = 0; i < m; ++i) z[i] = std::max(y[i] + at_y.c[i] / lip, 0.0);
      DualPoint at_z;
      dp.evaluate(z, at_z);
      ++iters;
      note(at_z);
      check_cap(at_z);
      if (at_z.value < cur.value) {
        if (opts.record_restarts) out.restarts.push_back(cur.value);
        y = cur.lam;
        t = 1.0;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double mom = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < m; ++i) y[i] = z[i] + mom * (z[i] - cur.lam[i]);
      t = t_next;
      cur = std::move(at_z);
      if (converged(cur)) break;
    }
    chunk = std::min(chunk * 2, 100000);
  }
  throw ToleranceNotReached("constrained descent step: iteration cap reached", best.x, best.lam,
                            best.residual);
}

}  // namespace

StepResult constrained_descent_step(const StepInput& in, const Domain& domain,
                                    const Regularizer& reg, CostCounters& counters,
                                    const StepOptions& opts) {
  const std::size_t n = domain.dim();
  const std::size_t m = in.g_at_center.size();
  require_same_dim(n, in.pi.size(), "step pi");
  require_same_dim(n, in.x_prev.size(), "step x_prev");
  require_same_dim(n, in.x_under.size(), "step x_under");
  require_same_dim(m, in.nu.rows(), "step nu rows");
  if (m > 0) require_same_dim(n, in.nu.cols(), "step nu cols");
  if (!in.lambda_init.empty()) require_same_dim(m, in.lambda_init.size(), "step lambda_init");
  if (in.eta < 0.0) throw InvalidArgument("step eta must be nonnegative");
  if (!(in.eta + reg.alpha > 0.0)) throw InvalidArgument("step requires eta > 0 or alpha > 0");

  const double tol = in.tol > 0.0 ? in.tol : 1e-10 * std::max(1.0, norm(in.pi));
  StepResult res;
  if (m == 0) {
    res.x = x_projection(domain, reg, in.pi, in.x_prev, in.eta);
    return res;
  }
  Vector b = jac_apply(in.nu, in.x_under, counters);
  for (std::size_t i = 0; i < m; ++i) b[i] = in.g_at_center[i] - b[i];

  DualProblem dp(in.pi, in.nu, std::move(b), in.x_prev, in.eta, domain, reg, counters);
  SolveOutcome sol = solve_dual(dp, in.lambda_init, tol, opts);
  res.x = std::move(sol.point.x);
  res.lam = std::move(sol.point.lam);
  res.kkt_residual = sol.point.residual;
  res.inner_iters = sol.iters;
  res.restart_dual_values = std::move(sol.restarts);
  return res;
}

double relaxation_dual_value(ConstSpan p, double f0, const Matrix& rows, ConstSpan consts,
                             const std::vector<bool>& mask, ConstSpan mu, const Domain& domain,
                             const Regularizer& reg, CostCounters& counters) {
  const std::size_t m = rows.rows();
  require_same_dim(m, consts.size(), "relaxation consts");
  require_same_dim(m, mask.size(), "relaxation mask");
  require_same_dim(m, mu.size(), "relaxation multiplier");
  Vector mu_eff(m, 0.0);
  double value = f0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!mask[i]) continue;
    if (mu[i] < 0.0) throw InvalidArgument("relaxation multiplier must be nonnegative");
    mu_eff[i] = mu[i];
    value += mu[i] * consts[i];
  }
  Vector y(p.begin(), p.end());
  if (m > 0) {
    const Vector h = jac_apply_t(rows, mu_eff, counters);
    axpy(1.0, h, y);
  }
  const Vector center = domain.center();
  const Vector x = x_projection(domain, reg, y, center, 0.0);
  return value + dot(y, x) + reg.value(x);
}

LowerBoundCertificate certified_lower_bound(ConstSpan weighted_pi, double weighted_f_terms,
                                            const Matrix& per_constraint_rows,
                                            ConstSpan per_constraint_consts,
                                            const std::vector<bool>& active_mask,
                                            const Domain& domain, const Regularizer& reg,
                                            double tol, CostCounters& counters) {
  if (!domain.bounded() && !(reg.alpha > 0.0)) {
    throw InvalidArgument("certified_lower_bound requires a bounded domain");
  }
  const std::size_t m = per_constraint_rows.rows();
  const std::size_t n = domain.dim();
  require_same_dim(n, weighted_pi.size(), "lower bound pi");
  require_same_dim(m, active_mask.size(), "lower bound mask");

  // Compact the active rows.
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < m; ++i) {
    if (active_mask[i]) act.push_back(i);
  }
  Matrix rows(act.size(), n);
  Vector b(act.size());
  for (std::size_t j = 0; j < act.size(); ++j) {
    const ConstSpan src = per_constraint_rows.row(act[j]);
    std::copy(src.begin(), src.end(), rows.row(j).begin());
    b[j] = per_constraint_consts[act[j]];
  }
  const std::vector<bool> all(act.size(), true);

  LowerBoundCertificate cert;
  cert.certified = true;
  Vector best_mu(act.size(), 0.0);
  double best = relaxation_dual_value(weighted_pi, weighted_f_terms, rows, b, all, best_mu, domain,
                                      reg, counters);
  auto consider = [&](const Vector& mu) {
    const double v =
        relaxation_dual_value(weighted_pi, weighted_f_terms, rows, b, all, mu, domain, reg, counters);
    if (v > best) {
      best = v;
      best_mu = mu;
    }
  };

  if (!act.empty()) {
    StepOptions opts;
    opts.max_iters = 20000;
    const double tol_dual = std::max(tol, 1e-14) * 1e-2;
    Vector mu(act.size(), 0.0);
    auto attempt = [&](const Vector& center, double eta) {
      try {
        DualProblem dp(weighted_pi, rows, b, center, eta, domain, reg, counters);
        SolveOutcome sol = solve_dual(dp, mu, tol_dual, opts);
        mu = sol.point.lam;
      } catch (const ToleranceNotReached& e) {
        mu = e.best_lambda;
      } catch (const InfeasibleStep&) {
        return;
      }
      consider(mu);
    };
    if (reg.alpha > 0.0) {
      attempt(Vector{}, 0.0);
    } else {
      // Smoothed duals with a shrinking proximal weight around the center;
      // each smoothed maximizer is scored on the exact dual.
      const Vector center = domain.center();
      const double diam = domain.diameter();
      double eta = std::max(1.0, norm(weighted_pi)) / diam;
      for (int round = 0; round < 14; ++round) {
        attempt(center, eta);
        if (0.5 * eta * diam * diam <= tol) break;
        eta *= 0.1;
      }
    }
  }
  cert.f_under = best;
  cert.dual_multiplier.assign(m, 0.0);
  for (std::size_t j = 0; j < act.size(); ++j) cert.dual_multiplier[act[j]] = best_mu[j];
  return cert;
}

}  // namespace acgd
