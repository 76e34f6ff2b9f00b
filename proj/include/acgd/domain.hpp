#pragma once

#include <variant>

#include "acgd/linalg.hpp"

namespace acgd {

// Absolute tolerance for projection post-checks (membership, optimality).
inline constexpr double kProjectionTol = 1e-9;

struct FreeSpace {
  std::size_t dim = 0;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Box {
  Vector lower;
  Vector upper;
};

// Feasible set X. Construction validates the invariants (lower <= upper,
// radius > 0, a single dimension n >= 1).
class Domain {
 public:
  using Kind = std::variant<FreeSpace, Ball, Box>;

  static Domain free(std::size_t dim);
  static Domain ball(Vector center, double radius);
  static Domain box(Vector lower, Vector upper);

  const Kind& kind() const { return kind_; }
  std::size_t dim() const;
  bool bounded() const;
  // max ||x - y|| over X; +inf for FreeSpace.
  double diameter() const;
  // A canonical interior point: ball center, box midpoint, origin.
  Vector center() const;
  bool contains(ConstSpan x, double tol = kProjectionTol) const;

  bool is_free() const { return std::holds_alternative<FreeSpace>(kind_); }
  bool is_ball() const { return std::holds_alternative<Ball>(kind_); }
  bool is_box() const { return std::holds_alternative<Box>(kind_); }

  bool operator==(const Domain& other) const;

 private:
  explicit Domain(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

// u(x) = alpha ||x||^2 / 2.
struct Regularizer {
  double alpha = 0.0;
  double value(ConstSpan x) const { return 0.5 * alpha * norm_sq(x); }
};

// argmin_{x in X} ||x - y||.
Vector euclidean_project(const Domain& domain, ConstSpan y);
void euclidean_project_into(const Domain& domain, ConstSpan y, MutSpan out);

// argmin_{x in X} <y, x> + alpha ||x||^2 / 2 + (eta / 2) ||x - xbar||^2.
//
// With eta + alpha > 0 the objective equals (eta + alpha)/2 ||x - z||^2 + const
// for z = (eta xbar - y) / (eta + alpha), so the answer is the Euclidean
// projection of z. With eta + alpha = 0 it is a linear minimization, which is
// only finite on bounded domains. O(n) for every domain kind.
Vector x_projection(const Domain& domain, const Regularizer& reg, ConstSpan y, ConstSpan xbar,
                    double eta);
void x_projection_into(const Domain& domain, const Regularizer& reg, ConstSpan y, ConstSpan xbar,
                       double eta, MutSpan out);

}  // namespace acgd
