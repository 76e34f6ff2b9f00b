#include "acgd/kernels.hpp"

#include <algorithm>

namespace acgd::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void combine(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void clamp(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a + i * cols, x, cols);
}

void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* lam, double* z) {
  std::fill(z, z + cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (lam[i] != 0.0) axpy(lam[i], a + i * cols, z, cols);
  }
}

const KernelTable kTable{Backend::Scalar, dot, axpy, combine, clamp, gemv, gemv_t};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace acgd::kernels::scalar
