#pragma once

#include <utility>

#include "ivdag/matrix.hpp"

namespace ivdag::metrics {

struct EvalReport {
  int shd = 0;
  double l1 = 0.0;
  double precision = 0.0;  // NaN when no edges called
  double recall = 0.0;     // NaN when the truth has no edges
  int n_true_edges = 0;
  int n_called_edges = 0;
  double threshold_used = 0.0;
};

// Structural Hamming distance over unordered node pairs. Convention used
// throughout this project: a missing edge costs 1, an extra edge costs 1,
// and a reversed edge costs 1 (not 2). SHD values are only comparable under
// a fixed convention; this one is pinned here and in the tests.
int shd(const Matrix& est_binary, const Matrix& truth_binary);

// Vector l1 norm between the flattened weighted adjacency matrices.
double l1_distance(const Matrix& w_est, const Matrix& w_true);

// Directed-edge precision and recall; NaN marks the undefined cases.
std::pair<double, double> precision_recall(const Matrix& est_binary, const Matrix& truth_binary);

// Full report: the estimate is thresholded at tau (strict) and cycle-repaired
// via graph::postprocess; the truth's support is its nonzero entries.
EvalReport evaluate(const Matrix& w_est, const Matrix& w_true, double tau);

}  // namespace ivdag::metrics
