#include "ivdag/simd/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace ivdag::simd {

namespace scalar {
double dot(const double*, const double*, std::size_t);
double sum_sq(const double*, std::size_t);
double sum(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
}  // namespace scalar

#if defined(IVDAG_HAVE_AVX2)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double sum_sq(const double*, std::size_t);
double sum(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
}  // namespace avx2
#endif

namespace {

constexpr detail::KernelTable kScalarTable = {
    &scalar::dot, &scalar::sum_sq, &scalar::sum, &scalar::axpy, &scalar::scale};

#if defined(IVDAG_HAVE_AVX2)
constexpr detail::KernelTable kAvx2Table = {
    &avx2::dot, &avx2::sum_sq, &avx2::sum, &avx2::axpy, &avx2::scale};

bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

Backend detect_backend() {
#if defined(IVDAG_HAVE_AVX2)
  if (cpu_has_avx2_fma()) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<const detail::KernelTable*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const detail::KernelTable* init_active() {
  Backend b = detect_backend();
  g_backend.store(b, std::memory_order_relaxed);
  const detail::KernelTable* t = &detail::table(b);
  g_active.store(t, std::memory_order_release);
  return t;
}

inline const detail::KernelTable* active() {
  const detail::KernelTable* t = g_active.load(std::memory_order_acquire);
  return t ? t : init_active();
}

}  // namespace

const detail::KernelTable& detail::table(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return kScalarTable;
    case Backend::Avx2:
#if defined(IVDAG_HAVE_AVX2)
      if (cpu_has_avx2_fma()) return kAvx2Table;
#endif
      throw std::runtime_error("avx2 kernels unavailable on this CPU/build");
  }
  throw std::runtime_error("unknown kernel backend");
}

Backend active_backend() {
  active();
  return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if defined(IVDAG_HAVE_AVX2)
  return cpu_has_avx2_fma();
#else
  return false;
#endif
}

void force_backend(Backend b) {
  g_active.store(&detail::table(b), std::memory_order_release);
  g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "?";
}

double dot(const double* x, const double* y, std::size_t n) { return active()->dot(x, y, n); }
double sum_sq(const double* x, std::size_t n) { return active()->sum_sq(x, n); }
double sum(const double* x, std::size_t n) { return active()->sum(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { active()->axpy(a, x, y, n); }
void scale(double a, double* x, std::size_t n) { active()->scale(a, x, n); }

}  // namespace ivdag::simd
