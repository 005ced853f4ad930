#pragma once

#include <cstddef>
#include <vector>

namespace ivdag {

// Dense row-major matrix. For weight matrices entry (i, j) is the edge
// i -> j. Row pointers are contiguous, which the square-matrix kernels rely on.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int p) {
    Matrix m(p, p);
    for (int i = 0; i < p; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  double* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  size_t size() const { return a_.size(); }

  void fill(double v) { a_.assign(a_.size(), v); }

  bool all_finite() const;
  double norm1() const;      // max absolute column sum
  double max_abs() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

// Sample matrix with n rows and p variables, stored column-major so that a
// variable's samples are contiguous (residual and variance passes walk
// columns).
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(long n, int p) : n_(n), p_(p), a_(static_cast<size_t>(n) * p, 0.0) {}

  long n() const { return n_; }
  int p() const { return p_; }

  double* col(int j) { return a_.data() + static_cast<size_t>(j) * n_; }
  const double* col(int j) const { return a_.data() + static_cast<size_t>(j) * n_; }

  double& at(long i, int j) { return a_[static_cast<size_t>(j) * n_ + i]; }
  double at(long i, int j) const { return a_[static_cast<size_t>(j) * n_ + i]; }

  bool all_finite() const;

  DataMatrix select_rows(const std::vector<long>& rows) const;

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.a_ == b.a_;
  }

 private:
  long n_ = 0;
  int p_ = 0;
  std::vector<double> a_;
};

}  // namespace ivdag
