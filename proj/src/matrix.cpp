#include "ivdag/matrix.hpp"

#include <cmath>
#include <cstring>

namespace ivdag {

bool Matrix::all_finite() const {
  for (double v : a_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Matrix::norm1() const {
  double best = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::fabs((*this)(i, j));
    if (s > best) best = s;
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : a_) {
    double m = std::fabs(v);
    if (m > best) best = m;
  }
  return best;
}

bool DataMatrix::all_finite() const {
  for (double v : a_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

DataMatrix DataMatrix::select_rows(const std::vector<long>& rows) const {
  DataMatrix out(static_cast<long>(rows.size()), p_);
  for (int j = 0; j < p_; ++j) {
    const double* src = col(j);
    double* dst = out.col(j);
    for (size_t r = 0; r < rows.size(); ++r) dst[r] = src[rows[r]];
  }
  return out;
}

}  // namespace ivdag
