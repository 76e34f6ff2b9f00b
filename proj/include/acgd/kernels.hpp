#pragma once

// Inner-loop arithmetic used by every solver: reductions, axpy, dense
// matrix-vector products and box clamping. Each routine has a scalar
// reference implementation and an AVX2 variant; the variant is picked once at
// startup from CPUID and can be overridden with ACGD_KIT_KERNELS=scalar|avx2.
//
// Elementwise kernels (axpy, combine, clamp, gemv_t) produce bitwise identical
// results across backends. Reductions (dot, gemv) use a different summation
// order in the AVX2 path and agree to rounding.

#include <cstddef>
#include <string_view>

namespace acgd::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = a * x + b * y
  void (*combine)(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n);
  // out = min(max(x, lo), hi)
  void (*clamp)(const double* x, const double* lo, const double* hi, double* out,
                std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // z = A^T lam
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* lam,
                 double* z);
};

bool backend_supported(Backend b);
const KernelTable& table_for(Backend b);

// Currently selected table.
const KernelTable& active();
Backend active_backend();
// Throws std::invalid_argument when the backend is not supported on this CPU.
void select_backend(Backend b);

std::string_view backend_name(Backend b);

namespace scalar {
const KernelTable& table();
}
namespace avx2 {
// nullptr when the build did not include AVX2 code.
const KernelTable* table();
}

}  // namespace acgd::kernels
