#pragma once

#include "ivdag/matrix.hpp"

namespace ivdag::numerics {

// Matrix exponential by scaling-and-squaring with a Pade core (orders 3, 5,
// 7, 9, 13 chosen from the 1-norm, Higham 2005). Relative error stays near
// machine precision for the norms this project produces; the contract is
// <= 1e-10 relative for ||M||_1 <= 50. Throws InvalidInputError on non-finite
// or non-square input.
Matrix matrix_exp(const Matrix& m);

// Acyclicity function h(W) = tr(exp(W o W)) - p, where o is the elementwise
// product. h >= 0, and h == 0 exactly when the support of W is a DAG. If
// grad is non-null it receives dh/dW = exp(W o W)^T o 2W (chain rule through
// the Hadamard square; validated against finite differences in the tests).
double acyclicity(const Matrix& w, Matrix* grad = nullptr);

// Solves A X = B by LU with partial pivoting (in-place copies, A square).
// Used by the Pade core and exposed for small dense solves elsewhere.
Matrix lu_solve(Matrix a, Matrix b);

}  // namespace ivdag::numerics
