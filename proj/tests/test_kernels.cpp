#include "doctest.h"

#include <cmath>
#include <vector>

#include "ivdag/rng.hpp"
#include "ivdag/simd/kernels.hpp"

using namespace ivdag;

namespace {

std::vector<double> random_vec(size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward sums") {
  const auto& scalar = simd::detail::table(simd::Backend::Scalar);
  std::vector<double> x = {1.0, -2.0, 3.0, 0.5};
  std::vector<double> y = {2.0, 1.0, -1.0, 4.0};
  CHECK(scalar.dot(x.data(), y.data(), 4) == doctest::Approx(1.0 * 2 - 2 * 1 - 3 * 1 + 0.5 * 4));
  CHECK(scalar.sum_sq(x.data(), 4) == doctest::Approx(1 + 4 + 9 + 0.25));
  CHECK(scalar.sum(x.data(), 4) == doctest::Approx(2.5));
  std::vector<double> z = y;
  scalar.axpy(2.0, x.data(), z.data(), 4);
  CHECK(z[0] == doctest::Approx(4.0));
  CHECK(z[3] == doctest::Approx(5.0));
  scalar.scale(0.5, z.data(), 4);
  CHECK(z[0] == doctest::Approx(2.0));
}

TEST_CASE("simd backends agree with the scalar reference") {
  if (!simd::backend_available(simd::Backend::Avx2)) {
    MESSAGE("avx2 unavailable; dispatch equivalence trivially holds");
    return;
  }
  const auto& scalar = simd::detail::table(simd::Backend::Scalar);
  const auto& avx2 = simd::detail::table(simd::Backend::Avx2);
  Rng rng(0xBEEF);
  // Lengths straddle the unroll widths and leave ragged tails.
  for (size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 8UL, 15UL, 16UL, 17UL, 63UL, 64UL, 1000UL, 4097UL}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);
    const double d0 = scalar.dot(x.data(), y.data(), n);
    const double d1 = avx2.dot(x.data(), y.data(), n);
    CHECK(d1 == doctest::Approx(d0).epsilon(1e-12));
    CHECK(avx2.sum_sq(x.data(), n) == doctest::Approx(scalar.sum_sq(x.data(), n)).epsilon(1e-12));
    CHECK(avx2.sum(x.data(), n) == doctest::Approx(scalar.sum(x.data(), n)).epsilon(1e-10));
    auto y0 = y, y1 = y;
    scalar.axpy(1.7, x.data(), y0.data(), n);
    avx2.axpy(1.7, x.data(), y1.data(), n);
    for (size_t i = 0; i < n; ++i) {
      CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-14));
    }
    auto s0 = x, s1 = x;
    scalar.scale(-0.3, s0.data(), n);
    avx2.scale(-0.3, s1.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(s1[i] == s0[i]);  // multiply is exact per lane
  }
}

TEST_CASE("force_backend pins the dispatch") {
  const simd::Backend original = simd::active_backend();
  simd::force_backend(simd::Backend::Scalar);
  CHECK(simd::active_backend() == simd::Backend::Scalar);
  std::vector<double> x = {1, 2, 3};
  CHECK(simd::sum(x.data(), 3) == doctest::Approx(6.0));
  simd::force_backend(original);
  CHECK(simd::active_backend() == original);
}
