#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ivdag/errors.hpp"
#include "ivdag/graph.hpp"
#include "ivdag/numerics.hpp"
#include "ivdag/rng.hpp"

using namespace ivdag;

TEST_CASE("mask_intervention leaves the observational regime untouched") {
  Matrix w(2, 2);
  w(0, 1) = 0.7;
  CHECK(graph::mask_intervention(w, 0) == w);
}

TEST_CASE("mask_intervention on the downstream node zeroes the whole two-node W") {
  Matrix w(2, 2);
  w(0, 1) = 0.7;
  Matrix masked = graph::mask_intervention(w, 2);
  CHECK(masked == Matrix(2, 2));
}

TEST_CASE("mask_intervention on the source leaves the structure unchanged") {
  Matrix w(2, 2);
  w(0, 1) = 0.7;
  CHECK(graph::mask_intervention(w, 1) == w);
}

TEST_CASE("mask_intervention bounds and idempotence") {
  Rng rng(5);
  Matrix w(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) w(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  CHECK_THROWS_AS(graph::mask_intervention(w, 5), InvalidInputError);
  CHECK_THROWS_AS(graph::mask_intervention(w, -1), InvalidInputError);
  for (int k = 1; k <= 4; ++k) {
    Matrix once = graph::mask_intervention(w, k);
    CHECK(graph::mask_intervention(once, k) == once);
    // differs from w only in column k-1
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (j == k - 1) {
          CHECK(once(i, j) == 0.0);
        } else {
          CHECK(once(i, j) == w(i, j));
        }
      }
    }
  }
}

TEST_CASE("threshold keeps strictly larger magnitudes") {
  Matrix w(2, 2);
  w(0, 1) = 0.25;
  w(1, 0) = 0.19;
  Matrix b = graph::threshold(w, 0.2);
  CHECK(b(0, 1) == 1.0);
  CHECK(b(1, 0) == 0.0);

  Matrix dense(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) dense(i, j) = 0.01 * (i + j + 1);
    }
  }
  Matrix all = graph::threshold(dense, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(all(i, j) == (i == j ? 0.0 : 1.0));
  }
}

TEST_CASE("topological_order handles the basics") {
  CHECK(graph::is_acyclic(Matrix(3, 3)));

  Matrix two_cycle(2, 2);
  two_cycle(0, 1) = two_cycle(1, 0) = 1.0;
  CHECK_FALSE(graph::is_acyclic(two_cycle));

  Matrix chain(3, 3);
  chain(0, 1) = chain(1, 2) = 1.0;
  auto topo = graph::topological_order(chain);
  CHECK(topo.acyclic);
  CHECK(topo.order == std::vector<int>{0, 1, 2});

  Matrix diag(2, 2);
  diag(0, 0) = 1.0;
  CHECK_THROWS_AS(graph::topological_order(diag), InvalidInputError);
}

TEST_CASE("topological_order names cycle nodes") {
  Matrix m(4, 4);
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;  // 1 <-> 2
  auto topo = graph::topological_order(m);
  CHECK_FALSE(topo.acyclic);
  CHECK(topo.cycle_nodes == std::vector<int>{1, 2});
}

TEST_CASE("is_acyclic agrees with the acyclicity function on random thresholds") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 2 + static_cast<int>(rng.bounded(7));
    Matrix w(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        if (i != j && rng.uniform01() < 0.35) w(i, j) = rng.uniform(-1.5, 1.5);
      }
    }
    const double tau = 0.4;
    Matrix b = graph::threshold(w, tau);
    Matrix w_thresh(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) w_thresh(i, j) = b(i, j) != 0.0 ? w(i, j) : 0.0;
    }
    CHECK(graph::is_acyclic(b) == (numerics::acyclicity(w_thresh) < 1e-10));
  }
}

TEST_CASE("postprocess repairs cycles by dropping the weakest edge") {
  Matrix w(3, 3);
  w(0, 1) = 1.0;
  w(1, 2) = 0.8;
  w(2, 0) = 0.05;  // weakest edge on the 3-cycle
  w(0, 0) = 0.3;   // stray diagonal must be cleared
  std::vector<std::pair<int, int>> removed;
  Matrix clean = graph::postprocess(w, 0.0, &removed);
  CHECK(removed == std::vector<std::pair<int, int>>{{2, 0}});
  CHECK(clean(2, 0) == 0.0);
  CHECK(clean(0, 1) == 1.0);
  CHECK(clean(0, 0) == 0.0);
  CHECK(graph::is_acyclic(graph::threshold(clean, 0.0)));
}

TEST_CASE("adjacency TSV round trip") {
  namespace fs = std::filesystem;
  Rng rng(3);
  Matrix w(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) w(i, j) = rng.uniform(-2.0, 2.0);
    }
  }
  const auto path = fs::temp_directory_path() / "ivdag_test_adj.tsv";
  graph::write_adjacency_tsv(w, path.string());
  Matrix back = graph::read_adjacency_tsv(path.string());
  CHECK(back == w);
  fs::remove(path);
}

TEST_CASE("adjacency TSV rejects malformed input") {
  namespace fs = std::filesystem;
  const auto path = fs::temp_directory_path() / "ivdag_test_bad_adj.tsv";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("0\t1\n0\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(graph::read_adjacency_tsv(path.string()), ParseError);
  fs::remove(path);
}
