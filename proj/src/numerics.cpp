#include "ivdag/numerics.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "ivdag/errors.hpp"
#include "ivdag/simd/kernels.hpp"

namespace ivdag::numerics {

namespace {

// C = A * B for square row-major matrices (ikj order, contiguous axpy rows).
Matrix multiply(const Matrix& a, const Matrix& b) {
  const int p = a.rows();
  Matrix c(p, p);
  for (int i = 0; i < p; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int k = 0; k < p; ++k) {
      if (ai[k] != 0.0) simd::axpy(ai[k], b.row(k), ci, static_cast<size_t>(p));
    }
  }
  return c;
}

Matrix add_scaled_identity(Matrix m, double c) {
  for (int i = 0; i < m.rows(); ++i) m(i, i) += c;
  return m;
}

// U <- A * (sum of odd Pade terms), V <- sum of even terms, for orders 3..9.
void pade_uv(const Matrix& a, const std::vector<Matrix>& pows, const double* b, int order,
             Matrix& u, Matrix& v) {
  const int p = a.rows();
  Matrix odd(p, p), even(p, p);
  for (int i = 0; i < p; ++i) odd(i, i) = b[1], even(i, i) = b[0];
  // pows[k] = A^{2k}, k >= 1.
  for (int k = 1; 2 * k + 1 <= order; ++k) {
    const Matrix& a2k = pows[k];
    const double bo = b[2 * k + 1];
    const double be = b[2 * k];
    for (size_t idx = 0; idx < a2k.size(); ++idx) {
      odd.data()[idx] += bo * a2k.data()[idx];
      even.data()[idx] += be * a2k.data()[idx];
    }
  }
  u = multiply(a, odd);
  v = even;
}

Matrix pade13(const Matrix& a, const Matrix& a2, const Matrix& a4, const Matrix& a6) {
  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
  const int p = a.rows();
  Matrix w1(p, p), w2(p, p), z1(p, p), z2(p, p);
  for (size_t i = 0; i < a2.size(); ++i) {
    w1.data()[i] = b[13] * a6.data()[i] + b[11] * a4.data()[i] + b[9] * a2.data()[i];
    z1.data()[i] = b[12] * a6.data()[i] + b[10] * a4.data()[i] + b[8] * a2.data()[i];
    w2.data()[i] = b[7] * a6.data()[i] + b[5] * a4.data()[i] + b[3] * a2.data()[i];
    z2.data()[i] = b[6] * a6.data()[i] + b[4] * a4.data()[i] + b[2] * a2.data()[i];
  }
  w2 = add_scaled_identity(std::move(w2), b[1]);
  z2 = add_scaled_identity(std::move(z2), b[0]);
  Matrix w = multiply(a6, w1);
  Matrix v = multiply(a6, z1);
  for (size_t i = 0; i < w.size(); ++i) {
    w.data()[i] += w2.data()[i];
    v.data()[i] += z2.data()[i];
  }
  Matrix u = multiply(a, w);
  // (V - U) F = (V + U)
  Matrix lhs(p, p), rhs(p, p);
  for (size_t i = 0; i < u.size(); ++i) {
    lhs.data()[i] = v.data()[i] - u.data()[i];
    rhs.data()[i] = v.data()[i] + u.data()[i];
  }
  return lu_solve(std::move(lhs), std::move(rhs));
}

}  // namespace

Matrix lu_solve(Matrix a, Matrix b) {
  const int p = a.rows();
  if (!a.square() || b.rows() != p) throw InvalidInputError("lu_solve: shape mismatch");
  std::vector<int> piv(p);
  std::iota(piv.begin(), piv.end(), 0);
  for (int k = 0; k < p; ++k) {
    int pivot = k;
    double best = std::fabs(a(k, k));
    for (int i = k + 1; i < p; ++i) {
      double m = std::fabs(a(i, k));
      if (m > best) best = m, pivot = i;
    }
    if (best == 0.0) throw InvalidInputError("lu_solve: singular matrix");
    if (pivot != k) {
      for (int j = 0; j < p; ++j) std::swap(a(k, j), a(pivot, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(pivot, j));
    }
    const double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < p; ++i) {
      const double f = a(i, k) * inv;
      if (f == 0.0) continue;
      a(i, k) = f;
      simd::axpy(-f, a.row(k) + k + 1, a.row(i) + k + 1, static_cast<size_t>(p - k - 1));
      simd::axpy(-f, b.row(k), b.row(i), static_cast<size_t>(b.cols()));
    }
  }
  // Back substitution, all right-hand sides at once.
  for (int k = p - 1; k >= 0; --k) {
    const double inv = 1.0 / a(k, k);
    simd::scale(inv, b.row(k), static_cast<size_t>(b.cols()));
    for (int i = 0; i < k; ++i) {
      simd::axpy(-a(i, k), b.row(k), b.row(i), static_cast<size_t>(b.cols()));
    }
  }
  return b;
}

Matrix matrix_exp(const Matrix& m) {
  if (!m.square()) throw InvalidInputError("matrix_exp: matrix must be square");
  if (!m.all_finite()) throw InvalidInputError("matrix_exp: non-finite entries");
  const int p = m.rows();
  if (p == 0) return Matrix(0, 0);

  static const double theta3 = 1.495585217958292e-2;
  static const double theta5 = 2.539398330063230e-1;
  static const double theta7 = 9.504178996162932e-1;
  static const double theta9 = 2.097847961257068e0;
  static const double theta13 = 5.371920351148152e0;
  static const double b3[4] = {120, 60, 12, 1};
  static const double b5[6] = {30240, 15120, 3360, 420, 30, 1};
  static const double b7[8] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  static const double b9[10] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                30270240.0,    2162160.0,    110880.0,     3960.0,
                                90.0,          1.0};

  const double norm = m.norm1();

  auto low_order = [&](const Matrix& a, const double* b, int order) {
    std::vector<Matrix> pows;
    pows.emplace_back();  // unused slot for A^0
    pows.push_back(multiply(a, a));                       // A^2
    for (int k = 2; 2 * k <= order - 1; ++k) pows.push_back(multiply(pows.back(), pows[1]));
    Matrix u, v;
    pade_uv(a, pows, b, order, u, v);
    Matrix lhs(p, p), rhs(p, p);
    for (size_t i = 0; i < u.size(); ++i) {
      lhs.data()[i] = v.data()[i] - u.data()[i];
      rhs.data()[i] = v.data()[i] + u.data()[i];
    }
    return lu_solve(std::move(lhs), std::move(rhs));
  };

  if (norm <= theta3) return low_order(m, b3, 3);
  if (norm <= theta5) return low_order(m, b5, 5);
  if (norm <= theta7) return low_order(m, b7, 7);
  if (norm <= theta9) return low_order(m, b9, 9);

  int squarings = 0;
  Matrix a = m;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const double scale_factor = std::ldexp(1.0, -squarings);
    simd::scale(scale_factor, a.data(), a.size());
  }
  Matrix a2 = multiply(a, a);
  Matrix a4 = multiply(a2, a2);
  Matrix a6 = multiply(a4, a2);
  Matrix f = pade13(a, a2, a4, a6);
  for (int s = 0; s < squarings; ++s) f = multiply(f, f);
  return f;
}

double acyclicity(const Matrix& w, Matrix* grad) {
  if (!w.square()) throw InvalidInputError("acyclicity: matrix must be square");
  const int p = w.rows();
  Matrix hadamard(p, p);
  for (size_t i = 0; i < w.size(); ++i) {
    const double v = w.data()[i];
    hadamard.data()[i] = v * v;
  }
  Matrix e = matrix_exp(hadamard);
  double trace = 0.0;
  for (int i = 0; i < p; ++i) trace += e(i, i);
  if (grad) {
    *grad = Matrix(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) (*grad)(i, j) = e(j, i) * 2.0 * w(i, j);
    }
  }
  // Exact value is >= 0; rounding in the trace can land a hair below.
  double h = trace - static_cast<double>(p);
  return h < 0.0 ? 0.0 : h;
}

}  // namespace ivdag::numerics
