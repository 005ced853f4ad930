#include "doctest.h"

#include <cmath>
#include <vector>

#include "ivdag/errors.hpp"
#include "ivdag/numerics.hpp"
#include "ivdag/rng.hpp"

using namespace ivdag;

namespace {

// Independent oracle: truncated Taylor series summed in extended precision.
// Converges to full accuracy for the small norms it is used at.
Matrix taylor_exp(const Matrix& m, int terms = 60) {
  const int p = m.rows();
  std::vector<long double> acc(static_cast<size_t>(p) * p, 0.0L);
  std::vector<long double> term(acc.size(), 0.0L);
  for (int i = 0; i < p; ++i) term[static_cast<size_t>(i) * p + i] = 1.0L;  // A^0
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = term[i];
  for (int k = 1; k <= terms; ++k) {
    std::vector<long double> next(acc.size(), 0.0L);
    for (int i = 0; i < p; ++i) {
      for (int l = 0; l < p; ++l) {
        const long double t = term[static_cast<size_t>(i) * p + l];
        if (t == 0.0L) continue;
        for (int j = 0; j < p; ++j) {
          next[static_cast<size_t>(i) * p + j] += t * static_cast<long double>(m(l, j));
        }
      }
    }
    for (size_t i = 0; i < acc.size(); ++i) {
      term[i] = next[i] / static_cast<long double>(k);
      acc[i] += term[i];
    }
  }
  Matrix out(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) out(i, j) = static_cast<double>(acc[static_cast<size_t>(i) * p + j]);
  }
  return out;
}

Matrix random_matrix(int p, double lo, double hi, Rng& rng) {
  Matrix m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

double max_rel_err(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max(1.0, std::fabs(b.data()[i]));
    worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("matrix_exp of zero is the identity") {
  Matrix z(3, 3);
  Matrix e = numerics::matrix_exp(z);
  CHECK(e == Matrix::identity(3));
}

TEST_CASE("matrix_exp of a nilpotent matrix terminates the series") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  Matrix e = numerics::matrix_exp(m);
  CHECK(e(0, 0) == doctest::Approx(1.0));
  CHECK(e(0, 1) == doctest::Approx(1.0));
  CHECK(e(1, 0) == doctest::Approx(0.0));
  CHECK(e(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("matrix_exp of the symmetric permutation matches cosh/sinh") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  Matrix e = numerics::matrix_exp(m);
  Matrix oracle = taylor_exp(m);
  CHECK(e(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(e(0, 1) == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  CHECK(max_rel_err(e, oracle) < 1e-13);
}

TEST_CASE("matrix_exp matches the extended-precision Taylor oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + static_cast<int>(rng.bounded(6));
    Matrix m = random_matrix(p, -0.3, 0.3, rng);
    Matrix e = numerics::matrix_exp(m);
    Matrix oracle = taylor_exp(m);
    CHECK(max_rel_err(e, oracle) < 1e-12);
  }
}

TEST_CASE("matrix_exp keeps exp(A)exp(-A) = I at large norms") {
  Rng rng(7);
  for (double scale : {1.0, 4.0, 12.0}) {
    Matrix m = random_matrix(6, -scale, scale, rng);
    Matrix neg = m;
    for (size_t i = 0; i < neg.size(); ++i) neg.data()[i] = -neg.data()[i];
    Matrix a = numerics::matrix_exp(m);
    Matrix b = numerics::matrix_exp(neg);
    // product should be the identity
    Matrix prod(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += a(i, k) * b(k, j);
        prod(i, j) = s;
      }
    }
    double anorm = a.norm1();
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        CHECK(std::fabs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9 * std::max(1.0, anorm));
      }
    }
  }
}

TEST_CASE("matrix_exp rejects bad input") {
  Matrix m(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(numerics::matrix_exp(m), InvalidInputError);
  CHECK_THROWS_AS(numerics::matrix_exp(Matrix(2, 3)), InvalidInputError);
}

TEST_CASE("acyclicity is zero with zero gradient at W = 0") {
  Matrix w(4, 4);
  Matrix grad;
  CHECK(numerics::acyclicity(w, &grad) == 0.0);
  CHECK(grad == Matrix(4, 4));
}

TEST_CASE("acyclicity vanishes on strictly triangular supports") {
  Rng rng(11);
  Matrix w(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) w(i, j) = rng.uniform(-3.0, 3.0);
  }
  CHECK(numerics::acyclicity(w) < 1e-12);
}

TEST_CASE("acyclicity of the two-cycle equals 2cosh(1) - 2") {
  Matrix w(2, 2);
  w(0, 1) = 1.0;
  w(1, 0) = 1.0;
  const double expected = 2.0 * std::cosh(1.0) - 2.0;  // = 1.0861612696304874
  CHECK(std::fabs(numerics::acyclicity(w) - expected) < 1e-9);
  CHECK(expected == doctest::Approx(1.0861612696).epsilon(1e-9));
}

TEST_CASE("acyclicity stays tiny under permutation of a triangular support") {
  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 2 + static_cast<int>(rng.bounded(9));
    std::vector<int> perm(p);
    for (int i = 0; i < p; ++i) perm[i] = i;
    rng.shuffle(perm);
    Matrix w(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (rng.uniform01() < 0.5) w(perm[i], perm[j]) = rng.uniform(-1.0, 1.0);
      }
    }
    CHECK(numerics::acyclicity(w) < 1e-10);
  }
}

TEST_CASE("acyclicity exceeds 1e-6 on cyclic supports with weights >= 0.1") {
  Rng rng(321);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 2 + static_cast<int>(rng.bounded(7));
    Matrix w(p, p);
    // background DAG edges
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (rng.uniform01() < 0.3) w(i, j) = rng.uniform(-1.0, 1.0);
      }
    }
    // plant a short cycle: 2-cycles take any weight magnitude in [0.1, 2];
    // longer cycles need larger weights for h to clear the bound.
    const bool two_cycle = p == 2 || rng.uniform01() < 0.5;
    auto signed_weight = [&](double lo, double hi) {
      const double mag = rng.uniform(lo, hi);
      return (rng.next_u64() & 1) ? mag : -mag;
    };
    if (two_cycle) {
      const int a = static_cast<int>(rng.bounded(p));
      int b = static_cast<int>(rng.bounded(p - 1));
      if (b >= a) ++b;
      w(a, b) = signed_weight(0.1, 2.0);
      w(b, a) = signed_weight(0.1, 2.0);
    } else {
      const int len = 3 + static_cast<int>(rng.bounded(std::min(p, 6) - 2));
      std::vector<int> nodes(p);
      for (int i = 0; i < p; ++i) nodes[i] = i;
      rng.shuffle(nodes);
      for (int i = 0; i < len; ++i) {
        w(nodes[i], nodes[(i + 1) % len]) = signed_weight(1.0, 2.0);
      }
    }
    CHECK(numerics::acyclicity(w) > 1e-6);
  }
}

TEST_CASE("acyclicity gradient matches central finite differences") {
  Rng rng(55);
  const double step = 1e-5;
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 2 + static_cast<int>(rng.bounded(7));
    Matrix w = random_matrix(p, -1.0, 1.0, rng);
    Matrix grad;
    numerics::acyclicity(w, &grad);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        Matrix wp = w, wm = w;
        wp(i, j) += step;
        wm(i, j) -= step;
        const double fd = (numerics::acyclicity(wp) - numerics::acyclicity(wm)) / (2 * step);
        CHECK(std::fabs(grad(i, j) - fd) / std::max(1.0, std::fabs(fd)) < 1e-4);
      }
    }
  }
}
