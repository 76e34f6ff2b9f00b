#include "acgd/acgd_s.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "acgd/errors.hpp"

namespace acgd {
namespace {

long checked_count(double s) {
  if (!(s <= static_cast<double>(kMaxInnerIterations))) {
    throw BudgetExceeded("inner iteration limit exceeds the supported maximum");
  }
  return std::max(1L, static_cast<long>(s));
}

double sum(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

InnerSchedule inner_schedule_nonstrong(int t, double M_t, double M_tilde_prev, double Delta,
                                       double r_bar, double R_hat) {
  if (t < 1 || !(Delta > 0.0) || !(r_bar > 0.0) || !(R_hat > 0.0) || M_t < 0.0) {
    throw InvalidArgument("inner_schedule_nonstrong: invalid arguments");
  }
  InnerSchedule s;
  s.M = M_t;
  if (M_t == 0.0) {
    s.degenerate = true;
    s.S = 1;
    s.delta = {1.0};
    s.beta = {0.0};
    s.gamma = {std::numeric_limits<double>::infinity()};
    s.rho = {1.0};
    s.M_tilde = 0.0;
    return s;
  }
  s.S = checked_count(std::ceil(M_t * Delta * t));
  s.M_tilde = static_cast<double>(s.S) / (Delta * t);
  const double beta = s.M_tilde * r_bar / R_hat;
  s.delta.assign(s.S, 1.0);
  s.beta.assign(s.S, beta);
  s.gamma.assign(s.S, s.M_tilde * s.M_tilde / beta);
  s.rho.assign(s.S, 1.0);
  if (M_tilde_prev > 0.0) s.rho[0] = s.M_tilde / M_tilde_prev;
  return s;
}

InnerSchedule inner_schedule_strong(int t, double M_t, double W_t, double w_t, double Delta,
                                    double alpha) {
  if (t < 1 || !(Delta > 0.0) || !(alpha > 0.0) || !(w_t > 0.0) || M_t < 0.0) {
    throw InvalidArgument("inner_schedule_strong: invalid arguments");
  }
  InnerSchedule s;
  s.M = M_t;
  if (M_t == 0.0) {
    s.degenerate = true;
    s.S = 1;
    s.delta = {1.0};
    s.beta = {0.0};
    s.gamma = {std::numeric_limits<double>::infinity()};
    s.rho = {1.0};
    s.W_next = W_t;
    return s;
  }
  const double A = w_t * M_t * M_t * Delta;
  if (!std::isfinite(A)) throw BudgetExceeded("inner budget overflow");
  const double M = M_t;
  if (t == 1 || W_t <= 0.0) {
    // least S with S(S+1)/2 >= A
    double S = std::ceil(0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * A)));
    while (S > 1 && (S - 1) * S / 2.0 >= A) S -= 1;
    while (S * (S + 1) / 2.0 < A) S += 1;
    s.S = checked_count(S);
    const double Sd = static_cast<double>(s.S);
    s.Gamma = std::sqrt(Sd * (Sd + 1.0) / 2.0 / A);
    s.delta.resize(s.S);
    s.beta.resize(s.S);
    s.gamma.resize(s.S);
    s.rho.assign(s.S, 1.0);
    for (long k = 1; k <= s.S; ++k) {
      s.delta[k - 1] = static_cast<double>(k) / s.Gamma;
      s.beta[k - 1] = 0.25 * alpha * static_cast<double>(k - 1);
      s.gamma[k - 1] = 4.0 / alpha * M * M * s.Gamma / s.delta[k - 1];
    }
  } else {
    const double wm = W_t * M;
    // least S with S wm + S(S-1)/2 >= A
    const double bq = wm - 0.5;
    double S = std::ceil(-bq + std::sqrt(bq * bq + 2.0 * A));
    S = std::max(S, 1.0);
    while (S > 1 && (S - 1) * wm + (S - 1) * (S - 2) / 2.0 >= A) S -= 1;
    while (S * wm + S * (S - 1) / 2.0 < A) S += 1;
    s.S = checked_count(S);
    const double Sd = static_cast<double>(s.S);
    // A Gamma^2 - S wm Gamma - S(S-1)/2 = 0, nonnegative root.
    const double lin = Sd * wm;
    s.Gamma = (lin + std::sqrt(lin * lin + 2.0 * A * Sd * (Sd - 1.0))) / (2.0 * A);
    s.delta.resize(s.S);
    s.beta.resize(s.S);
    s.gamma.resize(s.S);
    s.rho.assign(s.S, 1.0);
    for (long k = 1; k <= s.S; ++k) {
      s.delta[k - 1] = wm + static_cast<double>(k - 1) / s.Gamma;
      s.gamma[k - 1] = 4.0 / alpha * M * M * s.Gamma / s.delta[k - 1];
      s.beta[k - 1] = k == 1 ? 0.25 * alpha * wm * s.Gamma
                             : 0.25 * alpha * (wm * s.Gamma + static_cast<double>(k - 2));
    }
  }
  for (long k = 2; k <= s.S; ++k) s.rho[k - 1] = s.delta[k - 2] / s.delta[k - 1];
  s.W_next = s.delta[s.S - 1] / M;
  return s;
}

void link_phases(const InnerSchedule& prev, InnerSchedule& cur, double theta) {
  if (prev.degenerate || cur.degenerate) return;
  const double last = prev.delta[prev.S - 1] / sum(prev.delta);
  const double first = cur.delta[0] / sum(cur.delta);
  cur.rho[0] = theta * last / first;
}

void check_phase_conditions(const OuterSchedule& outer, int t, const InnerSchedule& in,
                            const InnerSchedule* next, bool last, double alpha, double rel_slack,
                            std::vector<std::string>& out) {
  auto le = [rel_slack](double a, double b) {
    return a <= b + rel_slack * std::max({1.0, std::abs(a), std::abs(b)});
  };
  auto fail = [&](long s, const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << t << " s=" << s << ": " << what << " (lhs=" << lhs << ", rhs=" << rhs << ")";
    out.push_back(os.str());
  };
  if (in.degenerate) return;
  const double half = 0.5 * alpha;
  const double M2 = in.M * in.M;
  for (long s = 1; s < in.S; ++s) {
    const double d0 = in.delta[s - 1], d1 = in.delta[s];
    if (!le(d1 * in.beta[s], d0 * (in.beta[s - 1] + half))) {
      fail(s, "delta_s(beta_s + alpha/2) >= delta_{s+1} beta_{s+1}", d0 * (in.beta[s - 1] + half),
           d1 * in.beta[s]);
    }
    if (!le(d1 * in.gamma[s], d0 * in.gamma[s - 1])) {
      fail(s, "delta_s gamma_s >= delta_{s+1} gamma_{s+1}", d0 * in.gamma[s - 1], d1 * in.gamma[s]);
    }
    const double rho = d0 / d1;
    if (!le(rho * M2, in.gamma[s - 1] * in.beta[s])) {
      fail(s, "gamma_s beta_{s+1} >= rho_{s+1} M^2", in.gamma[s - 1] * in.beta[s], rho * M2);
    }
    if (!le(std::abs(in.rho[s] - rho), rel_slack * std::max(1.0, rho))) {
      fail(s, "rho_{s+1} = delta_s / delta_{s+1}", in.rho[s], rho);
    }
  }
  const long S = in.S;
  if (last && !le(M2, in.gamma[S - 1] * (in.beta[S - 1] + half))) {
    fail(S, "gamma_S (beta_S + alpha/2) >= M^2", in.gamma[S - 1] * (in.beta[S - 1] + half), M2);
  }
  if (next && !next->degenerate && t < outer.size()) {
    // aggregate weights wbar_s = w_t delta_s / sum delta, compared as a
    // ratio with theta_{t+1} = w_t / w_{t+1}.
    const double theta = std::exp(outer.log_w[t - 1] - outer.log_w[t]);
    const double tail = theta * in.delta[S - 1] / sum(in.delta);
    const double head = next->delta[0] / sum(next->delta);
    if (!le(head * next->beta[0], tail * (in.beta[S - 1] + half))) {
      fail(S, "wbar_S (beta_S + alpha/2) >= wbar'_1 beta'_1", tail * (in.beta[S - 1] + half),
           head * next->beta[0]);
    }
    if (!le(head * next->gamma[0], tail * in.gamma[S - 1])) {
      fail(S, "wbar_S gamma_S >= wbar'_1 gamma'_1", tail * in.gamma[S - 1], head * next->gamma[0]);
    }
    const double rho = tail / head;
    if (!le(rho * M2, in.gamma[S - 1] * next->beta[0])) {
      fail(S, "gamma_S beta'_1 >= rho'_1 M^2", in.gamma[S - 1] * next->beta[0], rho * M2);
    }
  }
}

std::vector<std::string> check_sliding_conditions(const OuterSchedule& outer,
                                                  const std::vector<InnerSchedule>& inners,
                                                  double alpha, double rel_slack) {
  std::vector<std::string> out = check_schedule_conditions(outer, 0.5 * alpha, outer.L, rel_slack);
  const int T = static_cast<int>(inners.size());
  for (int t = 1; t <= T; ++t) {
    const InnerSchedule* next = t < T ? &inners[t] : nullptr;
    check_phase_conditions(outer, t, inners[t - 1], next, t == T, alpha, rel_slack, out);
  }
  return out;
}

double default_delta(double L, double alpha, double r_bar, double R_hat) {
  if (alpha > 0.0) return r_bar * r_bar / (L * R_hat * R_hat * alpha);
  return r_bar / (R_hat * L);
}

double default_r_hat(const ProblemInstance& instance, ConstSpan x0) {
  if (instance.meta()) {
    const double d = std::sqrt(dist_sq(x0, instance.meta()->x_star));
    if (d > 0.0) return d;
  }
  if (instance.domain().bounded()) return instance.domain().diameter();
  return 1.0;
}

SlidingTrace run_acgd_s(const ProblemInstance& instance, double L, double r_bar, double Delta,
                        int N, CostCounters& counters, const AcgdSOptions& opts) {
  if (!(r_bar > 0.0)) throw InvalidArgument("run_acgd_s requires r_bar > 0");
  const std::size_t n = instance.dim();
  const std::size_t m = instance.num_constraints();
  const Domain& domain = instance.domain();
  const Regularizer& reg = instance.reg();
  const double alpha = reg.alpha;

  SlidingTrace out;
  RunTrace& trace = out.run;
  trace.schedule = build_schedule(L, 0.5 * alpha, N);
  const OuterSchedule& sch = trace.schedule;
  trace.dual.reset(n, m);

  Vector x0 = opts.x0.empty() ? detail::default_start(instance) : opts.x0;
  require_same_dim(n, x0.size(), "start point");
  if (!domain.contains(x0)) x0 = euclidean_project(domain, x0);
  out.R_hat = opts.R_hat > 0.0 ? opts.R_hat : default_r_hat(instance, x0);
  out.Delta = Delta > 0.0 ? Delta : default_delta(L, alpha, r_bar, out.R_hat);

  OracleSample prev_sample = instance.evaluate(x0, counters);

  Vector x_prev2 = x0;
  Vector x_prev = x0;
  Vector x_under = x0;
  Vector x_bar = x0;
  Vector x_tilde(n);
  Vector lam0(m, 0.0);      // lambda^{S} of the previous phase
  Vector lam_m1(m, 0.0);    // lambda^{S-1} of the previous phase
  Vector y_carry = x0;      // y^{S} of the previous phase
  InnerSchedule prev_inner;
  bool have_prev = false;
  double W = 0.0;
  double q = 0.0;
  std::uint64_t inner_total = 0;

  Vector h(n), y(n), anchor(n), dlam(m), ext(m), nu_y(m), nu_xu(m), x_acc(n), lam_acc(m);
  Vector lam_cur(m);

  for (int t = 1; t <= N; ++t) {
    const int i = t - 1;
    const double tau = sch.tau[i];
    const double theta = sch.theta[i];
    const double eta = sch.eta[i];
    for (std::size_t j = 0; j < n; ++j) {
      x_tilde[j] = x_prev[j] + theta * (x_prev[j] - x_prev2[j]);
      x_under[j] = (tau * x_under[j] + x_tilde[j]) / (1.0 + tau);
    }
    const OracleSample s = instance.evaluate(x_under, counters);
    const double M = m > 0 ? operator_norm_upper(s.jac_g) : 0.0;

    InnerSchedule inner;
    if (alpha > 0.0) {
      inner = inner_schedule_strong(t, M, W, std::exp(sch.log_w[i]), out.Delta, alpha);
      if (have_prev) link_phases(prev_inner, inner, theta);
      W = inner.W_next;
    } else {
      const double mt_prev = have_prev ? prev_inner.M_tilde : 0.0;
      inner = inner_schedule_nonstrong(t, M, mt_prev, out.Delta, r_bar, out.R_hat);
    }
    inner_total += static_cast<std::uint64_t>(inner.S);
    if (inner_total > static_cast<std::uint64_t>(opts.max_inner_total)) {
      throw BudgetExceeded("sliding inner iteration budget exhausted");
    }

    if (m > 0) jac_apply_into(s.jac_g, x_under, nu_xu, counters);
    lam_cur = lam0;
    Vector lam_prev2 = lam_m1;
    Vector y_prev = y_carry;
    std::fill(x_acc.begin(), x_acc.end(), 0.0);
    std::fill(lam_acc.begin(), lam_acc.end(), 0.0);
    double delta_sum = 0.0;

    for (long k = 1; k <= inner.S; ++k) {
      const double rho = inner.rho[k - 1];
      const double beta = inner.beta[k - 1];
      // Dual extrapolation through the Jacobian.
      if (m > 0) {
        if (k == 1) {
          jac_apply_t_into(s.jac_g, lam_cur, h, counters);
          bool moved = false;
          for (std::size_t r = 0; r < m; ++r) {
            dlam[r] = lam_cur[r] - lam_prev2[r];
            moved = moved || dlam[r] != 0.0;
          }
          if (moved) {
            Vector h_prev(n);
            jac_apply_t_into(prev_sample.jac_g, dlam, h_prev, counters);
            axpy(rho, h_prev, h);
          }
        } else {
          for (std::size_t r = 0; r < m; ++r) {
            ext[r] = lam_cur[r] + rho * (lam_cur[r] - lam_prev2[r]);
          }
          jac_apply_t_into(s.jac_g, ext, h, counters);
        }
      } else {
        std::fill(h.begin(), h.end(), 0.0);
      }
      // One X-projection with the combined prox weight eta + beta.
      for (std::size_t j = 0; j < n; ++j) {
        h[j] += s.grad_f[j];
        anchor[j] = (eta * x_prev[j] + beta * y_prev[j]) / (eta + beta);
      }
      x_projection_into(domain, reg, h, anchor, eta + beta, y);
      // Closed-form prox on the nonnegative orthant.
      lam_prev2 = lam_cur;
      if (m > 0 && !inner.degenerate) {
        jac_apply_into(s.jac_g, y, nu_y, counters);
        const double gam = inner.gamma[k - 1];
        for (std::size_t r = 0; r < m; ++r) {
          const double c = nu_y[r] - nu_xu[r] + s.g_val[r];
          lam_cur[r] = std::max(lam_cur[r] + c / gam, 0.0);
        }
      }
      const double d = inner.delta[k - 1];
      delta_sum += d;
      const double wgt = d / delta_sum;
      for (std::size_t j = 0; j < n; ++j) x_acc[j] += wgt * (y[j] - x_acc[j]);
      for (std::size_t r = 0; r < m; ++r) lam_acc[r] += wgt * (lam_cur[r] - lam_acc[r]);
      y_prev = y;
    }
    // Carry the inner state into the next phase.
    lam0 = lam_cur;
    lam_m1 = lam_prev2;
    y_carry = y_prev;

    q = t == 1 ? 1.0 : q * theta + 1.0;
    const double ratio = 1.0 / q;
    for (std::size_t j = 0; j < n; ++j) x_bar[j] += ratio * (x_acc[j] - x_bar[j]);
    trace.dual.add(ratio, s, x_under, lam_acc);

    x_prev2 = std::move(x_prev);
    x_prev = x_acc;
    prev_sample = s;
    if (opts.keep_schedules) out.inners.push_back(inner);
    prev_inner = std::move(inner);
    have_prev = true;

    if (detail::should_log(t, N, opts.log_every)) {
      PhaseRecord rec = detail::make_record(instance, t, counters, x_bar);
      rec.S_t = prev_inner.S;
      if (opts.on_phase) opts.on_phase(rec, x_bar);
      trace.records.push_back(rec);
      if (opts.stop_when && opts.stop_when(rec)) {
        trace.phases = t;
        break;
      }
    }
    trace.lambda_last = lam_acc;
  }
  if (trace.phases == 0) trace.phases = N;
  trace.inner_total = inner_total;
  trace.x_bar = std::move(x_bar);
  trace.x_last = std::move(x_prev);
  return out;
}

}  // namespace acgd
