#include "acgd/domain.hpp"

#include <cmath>
#include <limits>

#include "acgd/errors.hpp"
#include "acgd/kernels.hpp"

namespace acgd {

Domain Domain::free(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("domain dimension must be >= 1");
  return Domain(FreeSpace{dim});
}

Domain Domain::ball(Vector center, double radius) {
  if (center.empty()) throw InvalidArgument("domain dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("ball radius must be positive and finite");
  }
  if (!all_finite(center)) throw InvalidArgument("ball center must be finite");
  return Domain(Ball{std::move(center), radius});
}

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.empty()) throw InvalidArgument("domain dimension must be >= 1");
  require_same_dim(lower.size(), upper.size(), "box bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw InvalidArgument("box requires lower[i] <= upper[i]");
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw InvalidArgument("box bounds must be finite");
    }
  }
  return Domain(Box{std::move(lower), std::move(upper)});
}

std::size_t Domain::dim() const {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return k.dim;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return k.center.size();
        } else {
          return k.lower.size();
        }
      },
      kind_);
}

bool Domain::bounded() const { return !is_free(); }

double Domain::diameter() const {
  if (const auto* b = std::get_if<Ball>(&kind_)) return 2.0 * b->radius;
  if (const auto* b = std::get_if<Box>(&kind_)) return std::sqrt(dist_sq(b->upper, b->lower));
  return std::numeric_limits<double>::infinity();
}

Vector Domain::center() const {
  if (const auto* b = std::get_if<Ball>(&kind_)) return b->center;
  if (const auto* b = std::get_if<Box>(&kind_)) return combine(0.5, b->lower, 0.5, b->upper);
  return Vector(dim(), 0.0);
}

bool Domain::contains(ConstSpan x, double tol) const {
  if (x.size() != dim()) return false;
  if (const auto* b = std::get_if<Ball>(&kind_)) {
    return std::sqrt(dist_sq(x, b->center)) <= b->radius + tol;
  }
  if (const auto* b = std::get_if<Box>(&kind_)) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < b->lower[i] - tol || x[i] > b->upper[i] + tol) return false;
    }
  }
  return all_finite(x);
}

bool Domain::operator==(const Domain& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  if (const auto* a = std::get_if<Ball>(&kind_)) {
    const auto& b = std::get<Ball>(other.kind_);
    return a->center == b.center && a->radius == b.radius;
  }
  if (const auto* a = std::get_if<Box>(&kind_)) {
    const auto& b = std::get<Box>(other.kind_);
    return a->lower == b.lower && a->upper == b.upper;
  }
  return dim() == other.dim();
}

void euclidean_project_into(const Domain& domain, ConstSpan y, MutSpan out) {
  require_same_dim(domain.dim(), y.size(), "euclidean_project");
  require_same_dim(domain.dim(), out.size(), "euclidean_project output");
  const auto& k = kernels::active();
  const std::size_t n = y.size();
  if (const auto* box = std::get_if<Box>(&domain.kind())) {
    k.clamp(y.data(), box->lower.data(), box->upper.data(), out.data(), n);
  } else if (const auto* ball = std::get_if<Ball>(&domain.kind())) {
    // out = c + (y - c) * min(1, r / ||y - c||)
    k.combine(1.0, y.data(), -1.0, ball->center.data(), out.data(), n);
    const double d = std::sqrt(k.dot(out.data(), out.data(), n));
    const double s = d > ball->radius ? ball->radius / d : 1.0;
    k.combine(s, out.data(), 1.0, ball->center.data(), out.data(), n);
  } else if (out.data() != y.data()) {
    std::copy(y.begin(), y.end(), out.begin());
  }
}

Vector euclidean_project(const Domain& domain, ConstSpan y) {
  Vector out(y.size());
  euclidean_project_into(domain, y, out);
  return out;
}

void x_projection_into(const Domain& domain, const Regularizer& reg, ConstSpan y, ConstSpan xbar,
                       double eta, MutSpan out) {
  const std::size_t n = domain.dim();
  require_same_dim(n, y.size(), "x_projection direction");
  require_same_dim(n, out.size(), "x_projection output");
  if (eta < 0.0 || reg.alpha < 0.0) throw InvalidArgument("x_projection needs eta, alpha >= 0");
  const double weight = eta + reg.alpha;
  const auto& k = kernels::active();
  if (weight > 0.0) {
    require_same_dim(n, xbar.size(), "x_projection center");
    k.combine(eta / weight, xbar.data(), -1.0 / weight, y.data(), out.data(), n);
    euclidean_project_into(domain, out, out);
    return;
  }
  // Linear minimization over a bounded set.
  if (const auto* box = std::get_if<Box>(&domain.kind())) {
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] > 0.0) {
        out[i] = box->lower[i];
      } else if (y[i] < 0.0) {
        out[i] = box->upper[i];
      } else {
        out[i] = 0.5 * (box->lower[i] + box->upper[i]);
      }
    }
  } else if (const auto* ball = std::get_if<Ball>(&domain.kind())) {
    const double ny = std::sqrt(k.dot(y.data(), y.data(), n));
    const double s = ny > 0.0 ? -ball->radius / ny : 0.0;
    k.combine(1.0, ball->center.data(), s, y.data(), out.data(), n);
  } else {
    throw UnboundedSubproblem("x_projection over free space requires eta + alpha > 0");
  }
}

Vector x_projection(const Domain& domain, const Regularizer& reg, ConstSpan y, ConstSpan xbar,
                    double eta) {
  Vector out(domain.dim());
  x_projection_into(domain, reg, y, xbar, eta, out);
  return out;
}

}  // namespace acgd
