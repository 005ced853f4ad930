#pragma once

#include <optional>
#include <string>

#include "ivdag/dataset.hpp"
#include "ivdag/matrix.hpp"
#include "ivdag/objective.hpp"

namespace ivdag::solver {

enum class FitStatus { Converged, RhoExhausted, IterBudget };
const char* to_string(FitStatus s);

struct FitConfig {
  double lambda1 = 0.1;        // l1 weight used by the core fit()
  double h_tol = 1e-8;         // acyclicity tolerance
  double rho_init = 1.0;       // augmented-Lagrangian penalty schedule
  double rho_max = 1e16;
  double rho_growth = 10.0;
  double progress_ratio = 0.25;
  int max_outer = 100;
  int inner_max_iter = 500;    // projected L-BFGS iteration budget per subproblem
  double inner_grad_tol = 1e-7;
  std::optional<Matrix> w_init;          // default: zeros (feasible, order-neutral)
  std::optional<double> post_threshold;  // applied by CLI/harness, not by fit()

  void validate() const;
};

struct FitResult {
  Matrix w_hat;
  double h_final = 0.0;
  int outer_iters = 0;
  long inner_iters_total = 0;
  double objective_final = 0.0;  // smooth loss + lambda * l1 at w_hat
  FitStatus status = FitStatus::Converged;
};

// Minimizes loss(W) + lambda1 * ||W||_1 subject to h(W) = 0 by an augmented
// Lagrangian: each outer step minimizes
//   loss(W) + lambda1 * sum(W+ + W-) + (rho/2) h(W)^2 + multiplier * h(W)
// over the split W = W+ - W+, W+/- >= 0 elementwise, with projected limited-
// memory BFGS (the split makes the l1 term linear, so zeros are exact). After
// each inner solve the multiplier takes mu += rho * h; rho grows by
// rho_growth whenever h fails to shrink to progress_ratio * previous h.
// Stops at h <= h_tol (Converged), rho > rho_max (RhoExhausted), or the outer
// budget (IterBudget). Diagonal entries are fixed at zero throughout.
// Throws DivergedError (carrying the last finite iterate) if the objective
// leaves the floats.
FitResult fit(objective::SmoothLoss& loss, const FitConfig& config);

// Convenience overloads that assemble the loss from an ObjectiveSpec. The
// spec's lambda1 is authoritative. Observational methods pull the regime-0
// rows out of an interventional dataset (see observational_matrix()).
FitResult fit(const InterventionalDataset& data, const objective::ObjectiveSpec& spec,
              FitConfig config);
FitResult fit(const DataMatrix& x, const objective::ObjectiveSpec& spec, FitConfig config);

// The sample matrix an observational-only method should see: the dataset's
// only regime if there is just one (whatever its index), otherwise regime 0.
// Throws InvalidInputError if several regimes exist and none is observational.
const DataMatrix& observational_matrix(const InterventionalDataset& data);

}  // namespace ivdag::solver
