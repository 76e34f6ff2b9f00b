#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "acgd/kernels.hpp"

#ifndef ACGD_KIT_HAVE_AVX2
namespace acgd::kernels::avx2 {
const KernelTable* table() { return nullptr; }
}  // namespace acgd::kernels::avx2
#endif

namespace acgd::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("ACGD_KIT_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return &scalar::table();
  if (backend_supported(Backend::Avx2)) return avx2::table();
  return &scalar::table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return avx2::table() != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& table_for(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("kernel backend not supported: " + std::string(backend_name(b)));
  }
  return b == Backend::Avx2 ? *avx2::table() : scalar::table();
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

Backend active_backend() { return active().backend; }

void select_backend(Backend b) { current().store(&table_for(b), std::memory_order_relaxed); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace acgd::kernels
