#include "ivdag/metrics.hpp"

#include <cmath>
#include <limits>

#include "ivdag/errors.hpp"
#include "ivdag/graph.hpp"

namespace ivdag::metrics {

namespace {

void check_shapes(const Matrix& a, const Matrix& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows()) {
    throw InvalidInputError("metrics: matrices must be square with matching p");
  }
}

inline bool edge(const Matrix& m, int i, int j) { return m(i, j) != 0.0; }

}  // namespace

int shd(const Matrix& est, const Matrix& truth) {
  check_shapes(est, truth);
  const int p = est.rows();
  int dist = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const bool e_ij = edge(est, i, j), e_ji = edge(est, j, i);
      const bool t_ij = edge(truth, i, j), t_ji = edge(truth, j, i);
      if (e_ij == t_ij && e_ji == t_ji) continue;
      const int ne = e_ij + e_ji, nt = t_ij + t_ji;
      if (ne == 1 && nt == 1) {
        ++dist;  // reversal
      } else {
        // Patterns differing by one addition/deletion cost 1; by two, 2.
        dist += std::abs(ne - nt) == 1 ? 1 : 2;
      }
    }
  }
  return dist;
}

double l1_distance(const Matrix& w_est, const Matrix& w_true) {
  check_shapes(w_est, w_true);
  double acc = 0.0;
  for (size_t i = 0; i < w_est.size(); ++i) {
    acc += std::fabs(w_est.data()[i] - w_true.data()[i]);
  }
  return acc;
}

std::pair<double, double> precision_recall(const Matrix& est, const Matrix& truth) {
  check_shapes(est, truth);
  const int p = est.rows();
  int tp = 0, called = 0, true_edges = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const bool e = edge(est, i, j), t = edge(truth, i, j);
      called += e;
      true_edges += t;
      tp += e && t;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double precision = called > 0 ? static_cast<double>(tp) / called : nan;
  double recall = true_edges > 0 ? static_cast<double>(tp) / true_edges : nan;
  return {precision, recall};
}

EvalReport evaluate(const Matrix& w_est, const Matrix& w_true, double tau) {
  check_shapes(w_est, w_true);
  // Cycle repair feeds the binary metrics only; l1 sees the thresholded
  // weights as-is.
  Matrix est_bin = graph::threshold(graph::postprocess(w_est, tau), 0.0);
  Matrix truth_bin = graph::threshold(w_true, 0.0);
  Matrix w_thresh = w_est;
  for (int i = 0; i < w_thresh.rows(); ++i) {
    for (int j = 0; j < w_thresh.cols(); ++j) {
      if (i == j || std::fabs(w_thresh(i, j)) <= tau) w_thresh(i, j) = 0.0;
    }
  }
  EvalReport rep;
  rep.threshold_used = tau;
  rep.shd = shd(est_bin, truth_bin);
  rep.l1 = l1_distance(w_thresh, w_true);
  auto [prec, rec] = precision_recall(est_bin, truth_bin);
  rep.precision = prec;
  rep.recall = rec;
  const int p = est_bin.rows();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      rep.n_called_edges += est_bin(i, j) != 0.0;
      rep.n_true_edges += truth_bin(i, j) != 0.0;
    }
  }
  return rep;
}

}  // namespace ivdag::metrics
