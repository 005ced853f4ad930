#pragma once

#include <memory>
#include <vector>

#include "ivdag/dataset.hpp"
#include "ivdag/matrix.hpp"
#include "ivdag/variance.hpp"

namespace ivdag::objective {

enum class Method { Dotears, LeastSquaresObs, NotearsInterventional, GolemProfileObs };

const char* method_name(Method m);
Method method_from_name(const std::string& name);  // throws InvalidInputError

struct ObjectiveSpec {
  Method method = Method::Dotears;
  variance::OmegaEstimate omega;  // consulted by Dotears only
  double lambda1 = 0.1;

  void validate(int p) const;
};

// Smooth part of the dotears objective (no l1 term):
//   (1/p) * sum_k (1/(2 n_k)) * sum_j ||(X^(k) - X^(k) W^(k))_j||^2 / omega_j
// where W^(k) masks column k and the sum runs over the regimes present in the
// dataset. The 1/p factor is a fixed constant (p = node count, not regime
// count) and does not affect the minimizer.
double dotears_value(const Matrix& w, const InterventionalDataset& data,
                     const variance::OmegaEstimate& omega);

// Analytic gradient: regime k contributes -(1/p)(1/n_k) X^T (X - X W^(k))
// Omega^{-1} with the masked column zeroed; the diagonal is zeroed last.
Matrix dotears_grad(const Matrix& w, const InterventionalDataset& data,
                    const variance::OmegaEstimate& omega);

// Per-regime, per-column decomposition of dotears_value before the 1/p
// factor: term(k, j) = (1/(2 n_k)) ||R_j||^2 / omega_j.
struct RegimeTerms {
  int k;
  std::vector<double> per_column;
};
std::vector<RegimeTerms> dotears_per_column(const Matrix& w, const InterventionalDataset& data,
                                            const variance::OmegaEstimate& omega);

// L_Omega from the two-node analyses: (1/n_k) sum_j ||R_j||^2 / omega_j for a
// single regime, no 1/2 and no 1/p.
double regime_loss_unnormalized(const Matrix& w, const DataMatrix& x, int regime,
                                const variance::OmegaEstimate& omega);

// Least squares on a single sample matrix: (1/(2n)) sum_j ||(X - XW)_j||^2.
double least_squares_value(const Matrix& w, const DataMatrix& x);
Matrix least_squares_grad(const Matrix& w, const DataMatrix& x);

// Gaussian profile likelihood: (1/2) sum_j log ||(X - XW)_j||^2. Throws
// SingularProfileError when a residual column has zero norm.
double golem_profile_value(const Matrix& w, const DataMatrix& x);
Matrix golem_profile_grad(const Matrix& w, const DataMatrix& x);

// Vector l1 norm of vec(W); the diagonal is structurally zero and excluded.
double l1_norm(const Matrix& w);

// Solver-facing adapter: value and gradient of one smooth loss. Instances
// hold references to caller-owned data and reuse an internal residual buffer,
// so one instance serves one fit at a time; the referenced data may be shared
// across concurrent fits.
class SmoothLoss {
 public:
  virtual ~SmoothLoss() = default;
  virtual int p() const = 0;
  virtual double value_grad(const Matrix& w, Matrix* grad) = 0;
};

// Builds the loss for a method. Dotears/NotearsInterventional require
// `data`; LeastSquaresObs/GolemProfileObs require `x`. Dotears requires
// `omega`; NotearsInterventional fixes omega to the identity.
std::unique_ptr<SmoothLoss> make_loss(Method method, const InterventionalDataset* data,
                                      const DataMatrix* x, const variance::OmegaEstimate* omega);

}  // namespace ivdag::objective
