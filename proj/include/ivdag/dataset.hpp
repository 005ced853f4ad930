#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivdag/matrix.hpp"

namespace ivdag {

// One experimental condition: k == 0 is observational, k in 1..p is a
// single-node intervention on node k (1-based).
struct Regime {
  int k = 0;
  DataMatrix data;
};

struct InterventionalDataset {
  int p = 0;
  std::vector<Regime> regimes;  // distinct k, ascending

  const DataMatrix* find(int k) const;
  long total_rows() const;
  // Regime indices in range, distinct, column counts == p, finite entries.
  void validate() const;
};

namespace io {

// Long-format TSV: header "intervention\tv1\t...\tvp", then one row per
// sample: the regime index followed by p floats. Floats are written in
// shortest round-trip decimal form, so write-then-read is the identity.
InterventionalDataset read_dataset(const std::string& tsv_path);
void write_dataset(const InterventionalDataset& ds, const std::string& tsv_path);

struct DatasetMeta {
  int p = 0;
  std::vector<std::pair<int, long>> regime_counts;
  uint64_t seed = 0;
  std::string scenario_json;  // raw JSON of the generating scenario, if any
  std::string truth_path;
  std::vector<double> sigmas;
};

void write_meta(const DatasetMeta& meta, const std::string& json_path);
DatasetMeta read_meta(const std::string& json_path);

// Dataset directory layout produced by `simulate`: data.tsv + meta.json,
// optionally observational.tsv, w_true.tsv.
struct DatasetDir {
  InterventionalDataset interventional;
  std::optional<DataMatrix> observational;
  std::optional<Matrix> w_true;
  DatasetMeta meta;
  bool has_meta = false;
};

DatasetDir load_dataset_dir(const std::string& dir);

}  // namespace io

}  // namespace ivdag
