#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "acgd/domain.hpp"
#include "acgd/linalg.hpp"

namespace acgd {

// (f(x), g(x), grad f(x), Jacobian of g at x). grad_f is the pi of a phase,
// jac_g its nu.
struct OracleSample {
  double f_val = 0.0;
  Vector g_val;
  Vector grad_f;
  Matrix jac_g;
};

// The two cost measures of a run. Threaded explicitly through every call.
struct CostCounters {
  std::uint64_t oracle_calls = 0;
  std::uint64_t matvecs = 0;
};

struct InstanceMeta {
  Vector x_star;
  Vector lambda_star;
  double f_star = 0.0;  // F(x*) including the regularizer
  double L_f = 0.0;
  double Lbar_g = 0.0;
  std::optional<double> D_X;
};

struct KktReport {
  double membership = 0.0;       // distance of x* to X
  double max_violation = 0.0;    // max_i g_i(x*)
  double complementarity = 0.0;  // max_i |lambda_i g_i(x*)|
  double stationarity = 0.0;     // projected-gradient residual of the Lagrangian
  bool ok = false;
};

using OracleFn = std::function<OracleSample(ConstSpan)>;
using QueryHook = std::function<void(ConstSpan, const OracleSample&)>;

// min_{x in X} f(x) + alpha ||x||^2 / 2  subject to  g(x) <= 0.
class ProblemInstance {
 public:
  ProblemInstance(std::string name, std::size_t n, std::size_t m, OracleFn oracle, Domain domain,
                  Regularizer reg, std::optional<InstanceMeta> meta = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return n_; }
  std::size_t num_constraints() const { return m_; }
  const Domain& domain() const { return domain_; }
  const Regularizer& reg() const { return reg_; }
  const std::optional<InstanceMeta>& meta() const { return meta_; }

  // Counted oracle call: increments counters.oracle_calls and runs the query
  // hook, if any.
  OracleSample evaluate(ConstSpan x, CostCounters& counters) const;
  // Uncounted evaluation for logging and certificates of already-counted
  // quantities. Never passes through the hook.
  OracleSample peek(ConstSpan x) const;

  // F(x) = f(x) + u(x), uncounted.
  double objective(ConstSpan x) const;

  void set_query_hook(QueryHook hook) { hook_ = std::move(hook); }
  // Replaces the domain. Metadata survives only when (x*, lambda*) still
  // passes the KKT check on the new set; D_X follows the new diameter.
  void set_domain(Domain d);
  void set_meta(std::optional<InstanceMeta> meta) { meta_ = std::move(meta); }

  KktReport check_kkt(double tol_feas = 1e-9, double tol_cs = 1e-7,
                      double tol_stat = 1e-6) const;

 private:
  void check_sample(const OracleSample& s) const;

  std::string name_;
  std::size_t n_;
  std::size_t m_;
  OracleFn oracle_;
  Domain domain_;
  Regularizer reg_;
  std::optional<InstanceMeta> meta_;
  QueryHook hook_;
};

// nu v, one matvec.
Vector jac_apply(const Matrix& jac, ConstSpan v, CostCounters& counters);
// nu^T lam, one matvec.
Vector jac_apply_t(const Matrix& jac, ConstSpan lam, CostCounters& counters);
void jac_apply_into(const Matrix& jac, ConstSpan v, MutSpan out, CostCounters& counters);
void jac_apply_t_into(const Matrix& jac, ConstSpan lam, MutSpan out, CostCounters& counters);

// Certified upper bound on the spectral norm (Frobenius norm).
double operator_norm_upper(const Matrix& jac);

}  // namespace acgd
