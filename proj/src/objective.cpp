#include "ivdag/objective.hpp"

#include <cmath>
#include <cstring>

#include "ivdag/errors.hpp"
#include "ivdag/simd/kernels.hpp"

namespace ivdag::objective {

const char* method_name(Method m) {
  switch (m) {
    case Method::Dotears: return "dotears";
    case Method::LeastSquaresObs: return "notears";
    case Method::NotearsInterventional: return "notears-iv";
    case Method::GolemProfileObs: return "golem-nv";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "dotears") return Method::Dotears;
  if (name == "notears") return Method::LeastSquaresObs;
  if (name == "notears-iv") return Method::NotearsInterventional;
  if (name == "golem-nv") return Method::GolemProfileObs;
  throw InvalidInputError("unknown method '" + name + "'");
}

void ObjectiveSpec::validate(int p) const {
  if (lambda1 < 0.0 || !std::isfinite(lambda1)) {
    throw InvalidInputError("lambda1 must be >= 0 and finite");
  }
  if (method == Method::Dotears) {
    if (omega.p() != p) throw InvalidInputError("dotears requires omega of length p");
    omega.validate();
  }
}

namespace {

// R = X - X * W with column `masked` of W treated as zero (masked < 0: none).
void residual(const Matrix& w, const DataMatrix& x, int masked, DataMatrix& r) {
  const int p = x.p();
  const long n = x.n();
  for (int j = 0; j < p; ++j) {
    double* rj = r.col(j);
    std::memcpy(rj, x.col(j), sizeof(double) * static_cast<size_t>(n));
    if (j == masked) continue;
    for (int i = 0; i < p; ++i) {
      const double wij = w(i, j);
      if (wij != 0.0) simd::axpy(-wij, x.col(i), rj, static_cast<size_t>(n));
    }
  }
}

void check_regimes(const Matrix& w, const InterventionalDataset& data) {
  if (w.rows() != data.p || !w.square()) throw InvalidInputError("W shape does not match data");
  if (data.regimes.empty()) throw InvalidInputError("dataset has no regimes");
  for (const auto& reg : data.regimes) {
    if (reg.data.n() == 0) {
      throw InvalidInputError("regime " + std::to_string(reg.k) + " is empty");
    }
    if (reg.data.p() != data.p) throw InvalidInputError("regime column count != p");
  }
}

double dotears_impl(const Matrix& w, const InterventionalDataset& data,
                    const variance::OmegaEstimate& omega, Matrix* grad, DataMatrix& rbuf) {
  check_regimes(w, data);
  if (omega.p() != data.p) throw InvalidInputError("omega length != p");
  omega.validate();
  const int p = data.p;
  if (grad) *grad = Matrix(p, p);
  double value = 0.0;
  for (const auto& reg : data.regimes) {
    const DataMatrix& x = reg.data;
    const long n = x.n();
    const int masked = reg.k - 1;  // column index; -1 when observational
    if (rbuf.n() != n || rbuf.p() != p) rbuf = DataMatrix(n, p);
    residual(w, x, masked, rbuf);
    for (int j = 0; j < p; ++j) {
      if (j == masked) {
        // Residual equals the data column; constant in W, still in the loss.
        value += 0.5 / (static_cast<double>(n) * omega.values[j]) *
                 simd::sum_sq(x.col(j), static_cast<size_t>(n));
        continue;
      }
      value += 0.5 / (static_cast<double>(n) * omega.values[j]) *
               simd::sum_sq(rbuf.col(j), static_cast<size_t>(n));
      if (grad) {
        const double c = -1.0 / (static_cast<double>(n) * omega.values[j] * p);
        for (int i = 0; i < p; ++i) {
          (*grad)(i, j) += c * simd::dot(x.col(i), rbuf.col(j), static_cast<size_t>(n));
        }
      }
    }
  }
  if (grad) {
    for (int i = 0; i < p; ++i) (*grad)(i, i) = 0.0;
  }
  return value / static_cast<double>(p);
}

double least_squares_impl(const Matrix& w, const DataMatrix& x, Matrix* grad, DataMatrix& rbuf) {
  const int p = x.p();
  const long n = x.n();
  if (w.rows() != p || !w.square()) throw InvalidInputError("W shape does not match data");
  if (n == 0) throw InvalidInputError("empty sample matrix");
  if (rbuf.n() != n || rbuf.p() != p) rbuf = DataMatrix(n, p);
  residual(w, x, -1, rbuf);
  double value = 0.0;
  for (int j = 0; j < p; ++j) {
    value += simd::sum_sq(rbuf.col(j), static_cast<size_t>(n));
  }
  value *= 0.5 / static_cast<double>(n);
  if (grad) {
    *grad = Matrix(p, p);
    const double c = -1.0 / static_cast<double>(n);
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < p; ++i) {
        if (i != j) (*grad)(i, j) = c * simd::dot(x.col(i), rbuf.col(j), static_cast<size_t>(n));
      }
    }
  }
  return value;
}

double golem_impl(const Matrix& w, const DataMatrix& x, Matrix* grad, DataMatrix& rbuf) {
  const int p = x.p();
  const long n = x.n();
  if (w.rows() != p || !w.square()) throw InvalidInputError("W shape does not match data");
  if (n == 0) throw InvalidInputError("empty sample matrix");
  if (rbuf.n() != n || rbuf.p() != p) rbuf = DataMatrix(n, p);
  residual(w, x, -1, rbuf);
  double value = 0.0;
  std::vector<double> ssq(p);
  for (int j = 0; j < p; ++j) {
    ssq[j] = simd::sum_sq(rbuf.col(j), static_cast<size_t>(n));
    if (!(ssq[j] > 0.0)) throw SingularProfileError(j);
    value += 0.5 * std::log(ssq[j]);
  }
  if (grad) {
    *grad = Matrix(p, p);
    for (int j = 0; j < p; ++j) {
      const double c = -1.0 / ssq[j];
      for (int i = 0; i < p; ++i) {
        if (i != j) (*grad)(i, j) = c * simd::dot(x.col(i), rbuf.col(j), static_cast<size_t>(n));
      }
    }
  }
  return value;
}

}  // namespace

double dotears_value(const Matrix& w, const InterventionalDataset& data,
                     const variance::OmegaEstimate& omega) {
  DataMatrix rbuf;
  return dotears_impl(w, data, omega, nullptr, rbuf);
}

Matrix dotears_grad(const Matrix& w, const InterventionalDataset& data,
                    const variance::OmegaEstimate& omega) {
  DataMatrix rbuf;
  Matrix grad;
  dotears_impl(w, data, omega, &grad, rbuf);
  return grad;
}

std::vector<RegimeTerms> dotears_per_column(const Matrix& w, const InterventionalDataset& data,
                                            const variance::OmegaEstimate& omega) {
  check_regimes(w, data);
  omega.validate();
  const int p = data.p;
  std::vector<RegimeTerms> out;
  DataMatrix rbuf;
  for (const auto& reg : data.regimes) {
    const DataMatrix& x = reg.data;
    const long n = x.n();
    if (rbuf.n() != n || rbuf.p() != p) rbuf = DataMatrix(n, p);
    residual(w, x, reg.k - 1, rbuf);
    RegimeTerms terms{reg.k, std::vector<double>(p)};
    for (int j = 0; j < p; ++j) {
      terms.per_column[j] = 0.5 / (static_cast<double>(n) * omega.values[j]) *
                            simd::sum_sq(rbuf.col(j), static_cast<size_t>(n));
    }
    out.push_back(std::move(terms));
  }
  return out;
}

double regime_loss_unnormalized(const Matrix& w, const DataMatrix& x, int regime,
                                const variance::OmegaEstimate& omega) {
  const int p = x.p();
  const long n = x.n();
  if (n == 0) throw InvalidInputError("empty sample matrix");
  omega.validate();
  DataMatrix r(n, p);
  residual(w, x, regime - 1, r);
  double value = 0.0;
  for (int j = 0; j < p; ++j) {
    value += simd::sum_sq(r.col(j), static_cast<size_t>(n)) / omega.values[j];
  }
  return value / static_cast<double>(n);
}

double least_squares_value(const Matrix& w, const DataMatrix& x) {
  DataMatrix rbuf;
  return least_squares_impl(w, x, nullptr, rbuf);
}

Matrix least_squares_grad(const Matrix& w, const DataMatrix& x) {
  DataMatrix rbuf;
  Matrix grad;
  least_squares_impl(w, x, &grad, rbuf);
  return grad;
}

double golem_profile_value(const Matrix& w, const DataMatrix& x) {
  DataMatrix rbuf;
  return golem_impl(w, x, nullptr, rbuf);
}

Matrix golem_profile_grad(const Matrix& w, const DataMatrix& x) {
  DataMatrix rbuf;
  Matrix grad;
  golem_impl(w, x, &grad, rbuf);
  return grad;
}

double l1_norm(const Matrix& w) {
  double acc = 0.0;
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < w.cols(); ++j) {
      if (i != j) acc += std::fabs(w(i, j));
    }
  }
  return acc;
}

namespace {

class DotearsLoss final : public SmoothLoss {
 public:
  DotearsLoss(const InterventionalDataset& data, variance::OmegaEstimate omega)
      : data_(data), omega_(std::move(omega)) {}
  int p() const override { return data_.p; }
  double value_grad(const Matrix& w, Matrix* grad) override {
    return dotears_impl(w, data_, omega_, grad, rbuf_);
  }

 private:
  const InterventionalDataset& data_;
  variance::OmegaEstimate omega_;
  DataMatrix rbuf_;
};

class LeastSquaresLoss final : public SmoothLoss {
 public:
  explicit LeastSquaresLoss(const DataMatrix& x) : x_(x) {}
  int p() const override { return x_.p(); }
  double value_grad(const Matrix& w, Matrix* grad) override {
    return least_squares_impl(w, x_, grad, rbuf_);
  }

 private:
  const DataMatrix& x_;
  DataMatrix rbuf_;
};

class GolemLoss final : public SmoothLoss {
 public:
  explicit GolemLoss(const DataMatrix& x) : x_(x) {}
  int p() const override { return x_.p(); }
  double value_grad(const Matrix& w, Matrix* grad) override {
    return golem_impl(w, x_, grad, rbuf_);
  }

 private:
  const DataMatrix& x_;
  DataMatrix rbuf_;
};

}  // namespace

std::unique_ptr<SmoothLoss> make_loss(Method method, const InterventionalDataset* data,
                                      const DataMatrix* x, const variance::OmegaEstimate* omega) {
  switch (method) {
    case Method::Dotears:
      if (!data) throw InvalidInputError("dotears requires an interventional dataset");
      if (!omega) throw InvalidInputError("dotears requires omega");
      return std::make_unique<DotearsLoss>(*data, *omega);
    case Method::NotearsInterventional:
      if (!data) throw InvalidInputError("notears-iv requires an interventional dataset");
      return std::make_unique<DotearsLoss>(*data, variance::identity_omega(data->p));
    case Method::LeastSquaresObs:
      if (!x) throw InvalidInputError("notears requires a single sample matrix");
      return std::make_unique<LeastSquaresLoss>(*x);
    case Method::GolemProfileObs:
      if (!x) throw InvalidInputError("golem-nv requires a single sample matrix");
      return std::make_unique<GolemLoss>(*x);
  }
  throw InvalidInputError("unknown method");
}

}  // namespace ivdag::objective
