#pragma once

#include <vector>

#include "acgd/instances.hpp"

namespace acgd {

// Linear memory of a first-order method: the affine set origin + span of all
// gradients returned so far. Membership is tested through the residual of an
// orthonormal basis (modified Gram-Schmidt with one reorthogonalization pass).
class SpanMemory {
 public:
  explicit SpanMemory(Vector origin);

  // Residual norm of (y - origin) after projection onto the span.
  double residual(ConstSpan y) const;
  // residual <= 1e-8 (1 + ||y||)
  bool contains(ConstSpan y) const;
  void add(ConstSpan v);

  std::size_t rank() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  // Largest 1-based coordinate index touched by any recorded vector.
  int discovered_coords() const { return discovered_; }

 private:
  Vector origin_;
  std::vector<Vector> basis_;
  int discovered_ = 0;
};

// Checks that the query lies in the memory, then adds grad f and the rows of
// the Jacobian. Throws SpanViolation when the query escapes the memory.
void record_query(SpanMemory& mem, ConstSpan query_point, const OracleSample& sample);

// beta gamma^2 / (2k + 2): the constraint violation floor of any point
// supported on the first k coordinates of the non-strongly convex chain.
double feasibility_floor(const NonstrongHardParams& p, int t);

}  // namespace acgd
