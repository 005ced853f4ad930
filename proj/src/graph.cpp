#include "ivdag/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ivdag/errors.hpp"
#include "ivdag/io_detail.hpp"

namespace ivdag::graph {

void check_adjacency(const Matrix& w) {
  if (!w.square()) throw InvalidInputError("adjacency matrix must be square");
  if (!w.all_finite()) throw InvalidInputError("adjacency matrix has non-finite entries");
  for (int i = 0; i < w.rows(); ++i) {
    if (w(i, i) != 0.0) throw InvalidInputError("adjacency matrix has a nonzero diagonal entry");
  }
}

Matrix mask_intervention(const Matrix& w, int regime) {
  if (!w.square()) throw InvalidInputError("mask_intervention: matrix must be square");
  const int p = w.rows();
  if (regime < 0 || regime > p) {
    throw InvalidInputError("mask_intervention: regime index " + std::to_string(regime) +
                            " outside 0.." + std::to_string(p));
  }
  Matrix out = w;
  if (regime >= 1) {
    const int col = regime - 1;
    for (int i = 0; i < p; ++i) out(i, col) = 0.0;
  }
  return out;
}

Matrix threshold(const Matrix& w, double tau) {
  if (tau < 0.0 || !std::isfinite(tau)) throw InvalidInputError("threshold: tau must be >= 0");
  Matrix b(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < w.cols(); ++j) {
      if (i != j && std::fabs(w(i, j)) > tau) b(i, j) = 1.0;
    }
  }
  return b;
}

TopoResult topological_order(const Matrix& binary) {
  if (!binary.square()) throw InvalidInputError("topological_order: matrix must be square");
  const int p = binary.rows();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const double v = binary(i, j);
      if (v != 0.0 && v != 1.0) throw InvalidInputError("topological_order: entries must be 0/1");
      if (i == j && v != 0.0) throw InvalidInputError("topological_order: nonzero diagonal");
    }
  }
  std::vector<int> indeg(p, 0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (binary(i, j) != 0.0) ++indeg[j];
    }
  }
  TopoResult res;
  std::vector<int> ready;
  for (int j = 0; j < p; ++j) {
    if (indeg[j] == 0) ready.push_back(j);
  }
  // Smallest index first keeps the order deterministic.
  size_t head = 0;
  while (head < ready.size()) {
    std::sort(ready.begin() + head, ready.end());
    int u = ready[head++];
    res.order.push_back(u);
    for (int j = 0; j < p; ++j) {
      if (binary(u, j) != 0.0 && --indeg[j] == 0) ready.push_back(j);
    }
  }
  res.acyclic = static_cast<int>(res.order.size()) == p;
  if (!res.acyclic) {
    res.order.clear();
    for (int j = 0; j < p; ++j) {
      if (indeg[j] > 0) res.cycle_nodes.push_back(j);
    }
  }
  return res;
}

bool is_acyclic(const Matrix& binary) { return topological_order(binary).acyclic; }

namespace {

// DFS for one directed cycle in the support of w; returns its edge list.
std::vector<std::pair<int, int>> find_cycle(const Matrix& w) {
  const int p = w.rows();
  std::vector<int> state(p, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<int> stack, parent(p, -1);
  for (int start = 0; start < p; ++start) {
    if (state[start] != 0) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      int u = stack.back();
      if (state[u] == 0) state[u] = 1;
      bool descended = false;
      for (int v = 0; v < p; ++v) {
        if (u == v || w(u, v) == 0.0) continue;
        if (state[v] == 1) {
          // Walk back from u to v along parents.
          std::vector<std::pair<int, int>> cycle{{u, v}};
          int cur = u;
          while (cur != v) {
            cycle.emplace_back(parent[cur], cur);
            cur = parent[cur];
          }
          return cycle;
        }
        if (state[v] == 0) {
          parent[v] = u;
          stack.push_back(v);
          descended = true;
          break;
        }
      }
      if (!descended) {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

Matrix postprocess(Matrix w, double tau, std::vector<std::pair<int, int>>* removed) {
  if (!w.square()) throw InvalidInputError("postprocess: matrix must be square");
  const int p = w.rows();
  for (int i = 0; i < p; ++i) w(i, i) = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (std::fabs(w(i, j)) <= tau) w(i, j) = 0.0;
    }
  }
  for (;;) {
    auto cycle = find_cycle(w);
    if (cycle.empty()) break;
    auto weakest = cycle.front();
    for (const auto& e : cycle) {
      if (std::fabs(w(e.first, e.second)) < std::fabs(w(weakest.first, weakest.second))) {
        weakest = e;
      }
    }
    w(weakest.first, weakest.second) = 0.0;
    if (removed) removed->push_back(weakest);
  }
  return w;
}

Matrix read_adjacency_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open adjacency file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    size_t pos = 0;
    while (pos <= line.size()) {
      size_t tab = line.find('\t', pos);
      std::string cell = line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos);
      row.push_back(io_detail::parse_double(cell, path, lineno));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row in " + path, lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty adjacency file: " + path);
  if (rows.size() != rows.front().size()) {
    throw ParseError("adjacency file is not square: " + path);
  }
  const int p = static_cast<int>(rows.size());
  Matrix w(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) w(i, j) = rows[i][j];
  }
  return w;
}

void write_adjacency_tsv(const Matrix& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write adjacency file: " + path);
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < w.cols(); ++j) {
      if (j) out << '\t';
      out << io_detail::format_double(w(i, j));
    }
    out << '\n';
  }
}

}  // namespace ivdag::graph
