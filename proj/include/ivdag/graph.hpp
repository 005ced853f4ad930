#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ivdag/matrix.hpp"

namespace ivdag::graph {

// Throws InvalidInputError unless w is square, finite, and zero on the
// diagonal.
void check_adjacency(const Matrix& w);

// Regime k of a weight matrix: k == 0 is the observational system (identity),
// k in 1..p zeroes the incoming column of node k (1-based). Idempotent.
Matrix mask_intervention(const Matrix& w, int regime);

// Binary support at strict threshold: entry (i,j) is 1 iff |w_ij| > tau.
Matrix threshold(const Matrix& w, double tau);

struct TopoResult {
  bool acyclic = false;
  std::vector<int> order;        // valid topological order when acyclic
  std::vector<int> cycle_nodes;  // nodes left with in-degree > 0 otherwise
};

// Kahn's algorithm on a 0/1 matrix (nonzero diagonal is rejected).
TopoResult topological_order(const Matrix& binary);
bool is_acyclic(const Matrix& binary);

// Post-processing applied to solver output before evaluation: zero the
// diagonal, zero entries with |w| <= tau, then break any residual cycle by
// deleting the smallest-magnitude edge on it until the support is a DAG.
// Removed edges (i, j) are appended to *removed when provided.
Matrix postprocess(Matrix w, double tau, std::vector<std::pair<int, int>>* removed = nullptr);

// Adjacency matrix file format: p rows x p columns of tab-separated decimal
// floats, no header.
Matrix read_adjacency_tsv(const std::string& path);
void write_adjacency_tsv(const Matrix& w, const std::string& path);

}  // namespace ivdag::graph
