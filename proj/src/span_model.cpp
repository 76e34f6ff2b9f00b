#include "acgd/span_model.hpp"

#include <cmath>
#include <sstream>

#include "acgd/errors.hpp"

namespace acgd {

SpanMemory::SpanMemory(Vector origin) : origin_(std::move(origin)) {
  for (std::size_t i = 0; i < origin_.size(); ++i) {
    if (origin_[i] != 0.0) discovered_ = static_cast<int>(i + 1);
  }
}

double SpanMemory::residual(ConstSpan y) const {
  require_same_dim(origin_.size(), y.size(), "span query");
  Vector r = combine(1.0, y, -1.0, origin_);
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis_) axpy(-dot(b, r), b, r);
  }
  return norm(r);
}

bool SpanMemory::contains(ConstSpan y) const { return residual(y) <= 1e-8 * (1.0 + norm(y)); }

void SpanMemory::add(ConstSpan v) {
  require_same_dim(origin_.size(), v.size(), "span vector");
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] != 0.0) {
      discovered_ = std::max(discovered_, static_cast<int>(i + 1));
      break;
    }
  }
  Vector r(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis_) axpy(-dot(b, r), b, r);
  }
  const double nr = norm(r);
  if (nr > 1e-8 * (1.0 + norm(v))) {
    for (double& x : r) x /= nr;
    basis_.push_back(std::move(r));
  }
}

void record_query(SpanMemory& mem, ConstSpan query_point, const OracleSample& sample) {
  if (!mem.contains(query_point)) {
    std::ostringstream os;
    os << "query point leaves the linear span (residual " << mem.residual(query_point) << ")";
    throw SpanViolation(os.str());
  }
  mem.add(sample.grad_f);
  for (std::size_t i = 0; i < sample.jac_g.rows(); ++i) mem.add(sample.jac_g.row(i));
}

double feasibility_floor(const NonstrongHardParams& p, int t) {
  if (t < 0 || t > p.k) throw InvalidArgument("feasibility_floor requires t <= k");
  return p.beta * p.gamma * p.gamma / (2.0 * p.k + 2.0);
}

}  // namespace acgd
