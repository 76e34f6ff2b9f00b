#include "acgd/acgd.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "acgd/errors.hpp"

namespace acgd {

double OuterSchedule::log_weight_sum(int N) const {
  const int upto = std::min(N, size());
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < upto; ++i) mx = std::max(mx, log_w[i]);
  double s = 0.0;
  for (int i = 0; i < upto; ++i) s += std::exp(log_w[i] - mx);
  return mx + std::log(s);
}

OuterSchedule build_schedule(double L, double alpha, int N) {
  if (!(L > 0.0)) throw InvalidArgument("schedule requires L > 0");
  if (alpha < 0.0) throw InvalidArgument("schedule requires alpha >= 0");
  if (N < 1) throw InvalidArgument("schedule requires N >= 1");
  OuterSchedule s;
  s.L = L;
  s.alpha = alpha;
  s.kappa = alpha > 0.0 ? L / alpha : std::numeric_limits<double>::infinity();
  const double cap = std::sqrt(s.kappa);
  auto tau = [cap](int t) { return std::min(0.5 * (t - 1), cap); };
  s.tau.resize(N);
  s.eta.resize(N);
  s.theta.resize(N);
  s.log_w.resize(N);
  for (int t = 1; t <= N; ++t) {
    s.tau[t - 1] = tau(t);
    s.eta[t - 1] = L / tau(t + 1);
    if (t == 1) {
      s.theta[0] = 0.0;
      s.log_w[0] = 0.0;
    } else {
      s.theta[t - 1] = tau(t) / (tau(t - 1) + 1.0);
      s.log_w[t - 1] = s.log_w[t - 2] - std::log(s.theta[t - 1]);
    }
  }
  return s;
}

std::vector<std::string> check_schedule_conditions(const OuterSchedule& s, double alpha, double L,
                                                   double rel_slack) {
  std::vector<std::string> out;
  auto fail = [&](int t, const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << t << ": " << what << " (lhs=" << lhs << ", rhs=" << rhs << ")";
    out.push_back(os.str());
  };
  auto le = [rel_slack](double a, double b) {
    return a <= b + rel_slack * std::max({1.0, std::abs(a), std::abs(b)});
  };
  const int N = s.size();
  for (int t = 2; t <= N; ++t) {
    const int i = t - 1;
    // ratio = w_t / w_{t-1}
    const double ratio = std::exp(s.log_w[i] - s.log_w[i - 1]);
    const double theta = 1.0 / ratio;
    if (!le(ratio * s.eta[i], s.eta[i - 1] + alpha)) {
      fail(t, "w_t eta_t <= w_{t-1}(eta_{t-1} + alpha)", ratio * s.eta[i], s.eta[i - 1] + alpha);
    }
    if (!le(ratio * s.tau[i], s.tau[i - 1] + 1.0)) {
      fail(t, "w_t tau_t <= w_{t-1}(tau_{t-1} + 1)", ratio * s.tau[i], s.tau[i - 1] + 1.0);
    }
    if (!le(theta * L, s.eta[i - 1] * s.tau[i])) {
      fail(t, "eta_{t-1} tau_t >= theta_t L", s.eta[i - 1] * s.tau[i], theta * L);
    }
  }
  if (N >= 1 && !le(L, s.eta[N - 1] * (s.tau[N - 1] + 1.0))) {
    fail(N, "eta_N (tau_N + 1) >= L", s.eta[N - 1] * (s.tau[N - 1] + 1.0), L);
  }
  return out;
}

void DualAggregate::reset(std::size_t n_, std::size_t m_) {
  n = n_;
  m = m_;
  pi_bar.assign(n, 0.0);
  f_const = 0.0;
  lam_nu = Matrix(m, n);
  lam_w.assign(m, 0.0);
  lam_const.assign(m, 0.0);
}

void DualAggregate::add(double ratio, const OracleSample& s, ConstSpan x_under, ConstSpan lam) {
  const double keep = 1.0 - ratio;
  for (std::size_t j = 0; j < n; ++j) pi_bar[j] = keep * pi_bar[j] + ratio * s.grad_f[j];
  f_const = keep * f_const + ratio * (s.f_val - dot(s.grad_f, x_under));
  for (std::size_t i = 0; i < m; ++i) {
    const double li = lam.empty() ? 0.0 : lam[i];
    const ConstSpan row = s.jac_g.row(i);
    MutSpan acc = lam_nu.row(i);
    for (std::size_t j = 0; j < n; ++j) acc[j] = keep * acc[j] + ratio * li * row[j];
    lam_w[i] = keep * lam_w[i] + ratio * li;
    lam_const[i] = keep * lam_const[i] + ratio * li * (s.g_val[i] - dot(row, x_under));
  }
}

LowerBoundCertificate DualAggregate::lower_bound(const Domain& domain, const Regularizer& reg,
                                                 double tol, CostCounters& counters) const {
  Matrix rows(m, n);
  Vector consts(m, 0.0);
  std::vector<bool> mask(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(lam_w[i] > 0.0)) continue;
    mask[i] = true;
    const ConstSpan src = lam_nu.row(i);
    MutSpan dst = rows.row(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = src[j] / lam_w[i];
    consts[i] = lam_const[i] / lam_w[i];
  }
  return certified_lower_bound(pi_bar, f_const, rows, consts, mask, domain, reg, tol, counters);
}

namespace detail {

Vector default_start(const ProblemInstance& instance) {
  return euclidean_project(instance.domain(), Vector(instance.dim(), 0.0));
}

PhaseRecord make_record(const ProblemInstance& instance, int t, const CostCounters& c,
                        ConstSpan x_bar) {
  PhaseRecord r;
  r.t = t;
  r.oracle_calls = c.oracle_calls;
  r.matvecs = c.matvecs;
  const OracleSample s = instance.peek(x_bar);
  r.objective = s.f_val + instance.reg().value(x_bar);
  r.feas_norm = positive_part_norm(s.g_val);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.obj_gap = instance.meta() ? r.objective - instance.meta()->f_star : nan;
  r.dist_sq = instance.meta() ? dist_sq(x_bar, instance.meta()->x_star) : nan;
  return r;
}

bool should_log(int t, int N, int every) {
  if (t == N) return true;
  return every > 0 && t % every == 0;
}

}  // namespace detail

RunTrace run_acgd(const ProblemInstance& instance, double L, double r, int N,
                  CostCounters& counters, const AcgdOptions& opts) {
  (void)r;
  const std::size_t n = instance.dim();
  const std::size_t m = instance.num_constraints();
  const Domain& domain = instance.domain();
  const Regularizer& reg = instance.reg();

  RunTrace trace;
  trace.schedule = build_schedule(L, reg.alpha, N);
  const OuterSchedule& sch = trace.schedule;
  trace.dual.reset(n, m);

  Vector x0 = opts.x0.empty() ? detail::default_start(instance) : opts.x0;
  require_same_dim(n, x0.size(), "start point");
  if (!domain.contains(x0)) x0 = euclidean_project(domain, x0);

  // The initial oracle call is part of the method's cost.
  instance.evaluate(x0, counters);

  Vector x_prev2 = x0;  // x^{t-2}
  Vector x_prev = x0;   // x^{t-1}
  Vector x_under = x0;
  Vector lam(m, 0.0);
  Vector x_bar = x0;
  double q = 0.0;  // W_{t} / w_{t}
  Vector x_tilde(n);

  for (int t = 1; t <= N; ++t) {
    const int i = t - 1;
    const double tau = sch.tau[i];
    const double theta = sch.theta[i];
    for (std::size_t j = 0; j < n; ++j) {
      x_tilde[j] = x_prev[j] + theta * (x_prev[j] - x_prev2[j]);
      x_under[j] = (tau * x_under[j] + x_tilde[j]) / (1.0 + tau);
    }
    const OracleSample s = instance.evaluate(x_under, counters);

    StepInput in;
    in.pi = s.grad_f;
    in.nu = s.jac_g;
    in.g_at_center = s.g_val;
    in.x_under = x_under;
    in.x_prev = x_prev;
    in.eta = sch.eta[i];
    in.lambda_init = lam;
    StepResult step = constrained_descent_step(in, domain, reg, counters, opts.step);
    trace.inner_total += static_cast<std::uint64_t>(step.inner_iters);

    q = t == 1 ? 1.0 : q * theta + 1.0;
    const double ratio = 1.0 / q;
    for (std::size_t j = 0; j < n; ++j) x_bar[j] += ratio * (step.x[j] - x_bar[j]);
    trace.dual.add(ratio, s, x_under, step.lam);

    x_prev2 = std::move(x_prev);
    x_prev = std::move(step.x);
    lam = std::move(step.lam);

    if (detail::should_log(t, N, opts.log_every)) {
      PhaseRecord rec = detail::make_record(instance, t, counters, x_bar);
      if (opts.on_phase) opts.on_phase(rec, x_bar);
      trace.records.push_back(rec);
      if (opts.stop_when && opts.stop_when(rec)) {
        trace.phases = t;
        break;
      }
    }
  }
  if (trace.phases == 0) trace.phases = N;
  trace.x_bar = std::move(x_bar);
  trace.x_last = std::move(x_prev);
  trace.lambda_last = std::move(lam);
  return trace;
}

}  // namespace acgd
