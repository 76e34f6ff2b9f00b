#include "acgd/qp_reference.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <variant>

#include "acgd/errors.hpp"

namespace acgd {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Face { Free, Lower, Upper };

struct Problem {
  MatrixXd H;  // Q + alpha I
  VectorXd c;
  MatrixXd A;
  VectorXd b;
  std::size_t n = 0;
  std::size_t m = 0;
};

struct Candidate {
  VectorXd x;
  VectorXd lam;  // full length m
};

// Solves the KKT system with coordinates in `faces` fixed to `fixed` values,
// equality on the constraints in `mask`, and an extra mu I + mu-shift toward
// `shift_center` on the Hessian (ball multiplier). Returns false when the
// system is singular.
bool solve_face(const Problem& p, const std::vector<Face>& faces, const VectorXd& fixed,
                unsigned mask, double mu, const VectorXd& shift_center, Candidate& out) {
  std::vector<int> free_idx;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (faces[i] == Face::Free) free_idx.push_back(static_cast<int>(i));
  }
  std::vector<int> eq_idx;
  for (std::size_t i = 0; i < p.m; ++i) {
    if (mask & (1u << i)) eq_idx.push_back(static_cast<int>(i));
  }
  const int nf = static_cast<int>(free_idx.size());
  const int ne = static_cast<int>(eq_idx.size());
  const int dim = nf + ne;

  VectorXd x = fixed;
  for (int j : free_idx) x(j) = 0.0;
  const VectorXd c_eff = p.c - mu * shift_center;

  if (dim == 0) {
    out.x = x;
    out.lam = VectorXd::Zero(static_cast<Eigen::Index>(p.m));
    return true;
  }
  MatrixXd K = MatrixXd::Zero(dim, dim);
  VectorXd rhs(dim);
  const VectorXd hx_fixed = p.H * x + mu * x;
  for (int a = 0; a < nf; ++a) {
    for (int b = 0; b < nf; ++b) K(a, b) = p.H(free_idx[a], free_idx[b]);
    K(a, a) += mu;
    rhs(a) = -c_eff(free_idx[a]) - hx_fixed(free_idx[a]);
  }
  for (int e = 0; e < ne; ++e) {
    double fixed_part = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) fixed_part += p.A(eq_idx[e], j) * x(j);
    for (int a = 0; a < nf; ++a) {
      K(nf + e, a) = p.A(eq_idx[e], free_idx[a]);
      K(a, nf + e) = p.A(eq_idx[e], free_idx[a]);
    }
    rhs(nf + e) = p.b(eq_idx[e]) - fixed_part;
  }
  Eigen::FullPivLU<MatrixXd> lu(K);
  lu.setThreshold(1e-11);
  if (!lu.isInvertible()) return false;
  const VectorXd sol = lu.solve(rhs);
  for (int a = 0; a < nf; ++a) x(free_idx[a]) = sol(a);
  out.x = x;
  out.lam = VectorXd::Zero(static_cast<Eigen::Index>(p.m));
  for (int e = 0; e < ne; ++e) out.lam(eq_idx[e]) = sol(nf + e);
  return out.x.allFinite() && out.lam.allFinite();
}

double objective(const Problem& p, const VectorXd& x) { return 0.5 * x.dot(p.H * x) + p.c.dot(x); }

bool valid(const Problem& p, const Domain& d, const std::vector<Face>& faces, const Candidate& cand,
           double mu, double tol) {
  const double scale = 1.0 + cand.x.lpNorm<Eigen::Infinity>() + cand.lam.lpNorm<Eigen::Infinity>();
  for (std::size_t i = 0; i < p.m; ++i) {
    if (cand.lam(i) < -tol * scale) return false;
  }
  if (p.m > 0) {
    const VectorXd slack = p.A * cand.x - p.b;
    for (std::size_t i = 0; i < p.m; ++i) {
      if (slack(i) > tol * scale) return false;
    }
  }
  Vector xv(cand.x.data(), cand.x.data() + cand.x.size());
  if (!d.contains(xv, tol * scale)) return false;
  if (mu < 0.0) return false;
  if (const auto* box = std::get_if<Box>(&d.kind())) {
    const VectorXd r = p.H * cand.x + p.c + p.A.transpose() * cand.lam;
    for (std::size_t i = 0; i < p.n; ++i) {
      if (box->lower[i] == box->upper[i]) continue;
      if (faces[i] == Face::Lower && r(i) < -tol * scale) return false;
      if (faces[i] == Face::Upper && r(i) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace

QpSolution solve_qp_reference(const QpData& qp, double tol) {
  Problem p;
  p.n = qp.domain.dim();
  p.m = qp.A.rows();
  require_same_dim(p.n, qp.c.size(), "qp c");
  require_same_dim(p.n, qp.Q.rows(), "qp Q");
  require_same_dim(p.m, qp.b.size(), "qp b");
  if (p.m > 16) throw InvalidArgument("reference QP enumeration supports at most 16 constraints");
  p.H = MatrixXd(p.n, p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.n; ++j) p.H(i, j) = qp.Q(i, j);
    p.H(i, i) += qp.alpha;
  }
  p.c = Eigen::Map<const VectorXd>(qp.c.data(), static_cast<Eigen::Index>(p.n));
  p.A = MatrixXd(p.m, p.n);
  for (std::size_t i = 0; i < p.m; ++i) {
    for (std::size_t j = 0; j < p.n; ++j) p.A(i, j) = qp.A(i, j);
  }
  p.b = Eigen::Map<const VectorXd>(qp.b.data(), static_cast<Eigen::Index>(p.m));

  QpSolution best;
  double best_obj = std::numeric_limits<double>::infinity();
  auto consider = [&](const Candidate& cand) {
    const double obj = objective(p, cand.x);
    if (obj < best_obj) {
      best_obj = obj;
      best.found = true;
      best.x.assign(cand.x.data(), cand.x.data() + cand.x.size());
      best.lambda.assign(cand.lam.data(), cand.lam.data() + cand.lam.size());
      for (double& l : best.lambda) l = std::max(l, 0.0);
      best.objective = obj;
    }
  };

  const unsigned subsets = 1u << p.m;
  const VectorXd zero_center = VectorXd::Zero(static_cast<Eigen::Index>(p.n));
  const std::vector<Face> all_free(p.n, Face::Free);

  if (const auto* box = std::get_if<Box>(&qp.domain.kind())) {
    std::size_t states = 1;
    for (std::size_t i = 0; i < p.n; ++i) states *= 3;
    std::vector<Face> faces(p.n);
    VectorXd fixed(p.n);
    for (std::size_t code = 0; code < states; ++code) {
      std::size_t rest = code;
      bool skip = false;
      for (std::size_t i = 0; i < p.n; ++i) {
        faces[i] = static_cast<Face>(rest % 3);
        rest /= 3;
        fixed(i) = faces[i] == Face::Upper ? box->upper[i] : box->lower[i];
        if (box->lower[i] == box->upper[i] && faces[i] != Face::Lower) skip = true;
      }
      if (skip) continue;
      for (unsigned mask = 0; mask < subsets; ++mask) {
        Candidate cand;
        if (solve_face(p, faces, fixed, mask, 0.0, zero_center, cand) &&
            valid(p, qp.domain, faces, cand, 0.0, tol)) {
          consider(cand);
        }
      }
    }
  } else {
    const VectorXd zero_fixed = VectorXd::Zero(static_cast<Eigen::Index>(p.n));
    const Ball* ball = std::get_if<Ball>(&qp.domain.kind());
    VectorXd center = zero_center;
    if (ball) center = Eigen::Map<const VectorXd>(ball->center.data(), static_cast<Eigen::Index>(p.n));
    for (unsigned mask = 0; mask < subsets; ++mask) {
      Candidate cand;
      if (solve_face(p, all_free, zero_fixed, mask, 0.0, center, cand) &&
          valid(p, qp.domain, all_free, cand, 0.0, tol)) {
        consider(cand);
      }
      if (!ball) continue;
      // Ball constraint active: ||x(mu) - center|| decreases in mu; bisect
      // for the radius.
      auto radius_gap = [&](double mu, Candidate& c) {
        if (!solve_face(p, all_free, zero_fixed, mask, mu, center, c)) {
          return std::numeric_limits<double>::quiet_NaN();
        }
        return (c.x - center).norm() - ball->radius;
      };
      Candidate probe;
      const double g0 = radius_gap(0.0, probe);
      if (!(g0 > 0.0)) continue;
      double lo = 0.0;
      double hi = 1.0;
      bool bracket = false;
      for (int it = 0; it < 80; ++it) {
        const double gh = radius_gap(hi, probe);
        if (std::isnan(gh)) break;
        if (gh <= 0.0) {
          bracket = true;
          break;
        }
        lo = hi;
        hi *= 2.0;
      }
      if (!bracket) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = radius_gap(mid, probe);
        if (std::isnan(gm)) break;
        (gm > 0.0 ? lo : hi) = mid;
      }
      Candidate cand_b;
      if (!std::isnan(radius_gap(hi, cand_b)) &&
          valid(p, qp.domain, all_free, cand_b, hi, tol)) {
        consider(cand_b);
      }
    }
  }
  return best;
}

}  // namespace acgd
