#pragma once

#include <cstddef>

// Vector kernels backing the dense linear algebra in this project. Every
// kernel has a scalar reference implementation and, on x86-64, an AVX2/FMA
// variant. The backend is chosen once at startup from CPUID; force_backend()
// overrides it (used by the equivalence tests and benchmarks). Backends may
// differ by a few ulps (FMA contraction, different reduction trees), so
// cross-backend comparisons are tolerance-based. Within one process the
// selected backend is fixed, which keeps runs bitwise reproducible.

namespace ivdag::simd {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool backend_available(Backend b);
void force_backend(Backend b);   // throws if unavailable on this CPU
const char* backend_name(Backend b);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i x[i]^2
double sum_sq(const double* x, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scale(double a, double* x, std::size_t n);

// Per-backend entry points, exposed so the tests can pin each implementation
// against the other regardless of the dispatch default.
namespace detail {
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
};
const KernelTable& table(Backend b);  // throws if unavailable
}  // namespace detail

}  // namespace ivdag::simd
