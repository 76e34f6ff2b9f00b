#include "acgd/linalg.hpp"

#include <cmath>

#include "acgd/errors.hpp"
#include "acgd/kernels.hpp"

namespace acgd {

void require_same_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) +
                            ", got " + std::to_string(got));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double dot(ConstSpan a, ConstSpan b) {
  require_same_dim(a.size(), b.size(), "dot");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm_sq(ConstSpan a) { return kernels::active().dot(a.data(), a.data(), a.size()); }

double norm(ConstSpan a) { return std::sqrt(norm_sq(a)); }

double dist_sq(ConstSpan a, ConstSpan b) {
  require_same_dim(a.size(), b.size(), "dist_sq");
  Vector d(a.size());
  kernels::active().combine(1.0, a.data(), -1.0, b.data(), d.data(), a.size());
  return norm_sq(d);
}

double frobenius_norm(const Matrix& a) { return norm(a.flat()); }

void axpy(double a, ConstSpan x, MutSpan y) {
  require_same_dim(y.size(), x.size(), "axpy");
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

Vector combine(double a, ConstSpan x, double b, ConstSpan y) {
  require_same_dim(x.size(), y.size(), "combine");
  Vector out(x.size());
  kernels::active().combine(a, x.data(), b, y.data(), out.data(), x.size());
  return out;
}

Vector scaled(double a, ConstSpan x) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v *= a;
  return out;
}

double positive_part_norm(ConstSpan g) {
  double s = 0.0;
  for (double v : g) {
    if (v > 0.0) s += v * v;
  }
  return std::sqrt(s);
}

bool all_finite(ConstSpan x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace acgd
