#pragma once

#include <vector>

#include "ivdag/matrix.hpp"

namespace ivdag::baselines {

struct SortnregressConfig {
  enum class Penalty { InformationCriterion, FixedLambda };
  Penalty rule = Penalty::InformationCriterion;
  double lambda = 0.0;  // FixedLambda only
};

// Variance-ordering diagnostic: sort nodes by increasing marginal sample
// variance (ties broken by node index), then lasso-regress each node on all
// of its variance-predecessors. Edges therefore always point from lower to
// higher marginal variance and the output support is acyclic by construction.
// Columns are centered inside the per-node regressions. Under
// InformationCriterion each node's lambda minimizes n*log(RSS/n) +
// df*log(n) over the coordinate-descent regularization path, df = active-set
// size. Throws DegenerateDataError on constant columns.
Matrix sortnregress(const DataMatrix& x, const SortnregressConfig& config = {});

// Two-node varsortability condition: whether the marginal variance ordering
// of X1 -> X2 with weight w and gamma = sigma1^2/sigma2^2 matches the causal
// order, i.e. |w| >= sqrt(1 - 1/gamma). gamma <= 1 is always varsortable.
bool varsortability_cutoff(double w, double gamma);

// Lasso for one response: minimizes (1/(2n)) ||y - X b||^2 + lambda ||b||_1
// by cyclic coordinate descent (columns centered by the caller). Exposed for
// the regression-path tests.
std::vector<double> lasso_cd(const DataMatrix& x, const std::vector<int>& cols,
                             const std::vector<double>& y, double lambda,
                             std::vector<double> warm_start = {});

}  // namespace ivdag::baselines
