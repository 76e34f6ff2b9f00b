#include "acgd/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "acgd/errors.hpp"
#include "acgd/kernels.hpp"

namespace acgd {

ProblemInstance::ProblemInstance(std::string name, std::size_t n, std::size_t m, OracleFn oracle,
                                 Domain domain, Regularizer reg, std::optional<InstanceMeta> meta)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      oracle_(std::move(oracle)),
      domain_(std::move(domain)),
      reg_(reg),
      meta_(std::move(meta)) {
  require_same_dim(n_, domain_.dim(), "instance domain");
  if (reg_.alpha < 0.0) throw InvalidArgument("regularizer alpha must be nonnegative");
  if (meta_) {
    require_same_dim(n_, meta_->x_star.size(), "meta x_star");
    require_same_dim(m_, meta_->lambda_star.size(), "meta lambda_star");
  }
}

void ProblemInstance::check_sample(const OracleSample& s) const {
  require_same_dim(m_, s.g_val.size(), "oracle g");
  require_same_dim(n_, s.grad_f.size(), "oracle grad f");
  require_same_dim(m_, s.jac_g.rows(), "oracle jacobian rows");
  if (m_ > 0) require_same_dim(n_, s.jac_g.cols(), "oracle jacobian cols");
  if (!std::isfinite(s.f_val) || !all_finite(s.g_val) || !all_finite(s.grad_f) ||
      !all_finite(s.jac_g.flat())) {
    throw NonFiniteInput("oracle returned non-finite values");
  }
}

OracleSample ProblemInstance::peek(ConstSpan x) const {
  require_same_dim(n_, x.size(), "oracle query");
  if (!all_finite(x)) throw NonFiniteInput("oracle query point is not finite");
  OracleSample s = oracle_(x);
  check_sample(s);
  return s;
}

OracleSample ProblemInstance::evaluate(ConstSpan x, CostCounters& counters) const {
  OracleSample s = peek(x);
  ++counters.oracle_calls;
  if (hook_) hook_(x, s);
  return s;
}

double ProblemInstance::objective(ConstSpan x) const { return peek(x).f_val + reg_.value(x); }

void ProblemInstance::set_domain(Domain d) {
  require_same_dim(n_, d.dim(), "instance domain");
  domain_ = std::move(d);
  if (meta_) {
    if (!domain_.contains(meta_->x_star) || !check_kkt().ok) {
      meta_.reset();
    } else if (domain_.bounded()) {
      meta_->D_X = domain_.diameter();
    } else {
      meta_->D_X.reset();
    }
  }
}

KktReport ProblemInstance::check_kkt(double tol_feas, double tol_cs, double tol_stat) const {
  KktReport r;
  if (!meta_) return r;
  const Vector& x = meta_->x_star;
  const Vector& lam = meta_->lambda_star;
  const OracleSample s = peek(x);

  r.membership = std::sqrt(dist_sq(x, euclidean_project(domain_, x)));
  for (std::size_t i = 0; i < m_; ++i) {
    r.max_violation = std::max(r.max_violation, s.g_val[i]);
    r.complementarity = std::max(r.complementarity, std::abs(lam[i] * s.g_val[i]));
  }
  // x* must be a fixed point of the projected Lagrangian gradient step.
  Vector lag_grad = s.grad_f;
  axpy(reg_.alpha, x, lag_grad);
  for (std::size_t i = 0; i < m_; ++i) axpy(lam[i], s.jac_g.row(i), lag_grad);
  const Vector trial = euclidean_project(domain_, combine(1.0, x, -1.0, lag_grad));
  r.stationarity = std::sqrt(dist_sq(trial, x));

  const bool lam_ok = std::all_of(lam.begin(), lam.end(), [](double v) { return v >= 0.0; });
  r.ok = lam_ok && r.membership <= tol_feas && r.max_violation <= tol_feas &&
         r.complementarity <= tol_cs && r.stationarity <= tol_stat;
  return r;
}

void jac_apply_into(const Matrix& jac, ConstSpan v, MutSpan out, CostCounters& counters) {
  require_same_dim(jac.cols(), v.size(), "jac_apply input");
  require_same_dim(jac.rows(), out.size(), "jac_apply output");
  kernels::active().gemv(jac.data(), jac.rows(), jac.cols(), v.data(), out.data());
  ++counters.matvecs;
}

void jac_apply_t_into(const Matrix& jac, ConstSpan lam, MutSpan out, CostCounters& counters) {
  require_same_dim(jac.rows(), lam.size(), "jac_apply_t input");
  require_same_dim(jac.cols(), out.size(), "jac_apply_t output");
  kernels::active().gemv_t(jac.data(), jac.rows(), jac.cols(), lam.data(), out.data());
  ++counters.matvecs;
}

Vector jac_apply(const Matrix& jac, ConstSpan v, CostCounters& counters) {
  Vector out(jac.rows());
  jac_apply_into(jac, v, out, counters);
  return out;
}

Vector jac_apply_t(const Matrix& jac, ConstSpan lam, CostCounters& counters) {
  Vector out(jac.cols());
  jac_apply_t_into(jac, lam, out, counters);
  return out;
}

double operator_norm_upper(const Matrix& jac) { return frobenius_norm(jac); }

}  // namespace acgd
