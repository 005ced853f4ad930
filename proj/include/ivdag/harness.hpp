#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivdag/dataset.hpp"
#include "ivdag/metrics.hpp"
#include "ivdag/objective.hpp"
#include "ivdag/simgen.hpp"
#include "ivdag/solver.hpp"

// Experiment orchestration. A sweep spec is a JSON document:
//
//   {
//     "kind": "two_node" | "three_node" | "random_graph" | "sensitivity"
//             | "threshold_study",
//     "seed": 1,
//     "replicates": 25,
//     "methods": ["dotears", "notears", "notears-iv", "golem-nv", "sortnregress"],
//     "lambda": 0.1,                      // fixed l1 weight (default 0.1)
//     "cv": {"folds": 5, "lambda_grid": [0.001, 0.01, 0.1, 1, 10, 100]},
//     "cv_fresh_draw": false,             // CV on a separate draw (paper protocol)
//     "threshold": 0.3,                   // evaluation threshold
//     // two_node / three_node:
//     "w_grid": [0.1, ..., 1.5], "gamma_grid": [1, 2, 4, 10, 100],
//     "alpha": 4.0, "n_k": 1000,
//     "topology": "chain" | "collider" | "fork",   // three_node only
//     // random_graph:
//     "scenarios": [ <scenario JSON>, ... ],       // see simgen.hpp
//     // sensitivity:
//     "base": <scenario JSON>, "models": [ <intervention JSON>, ... ],
//     // threshold_study:
//     "scenario": <scenario JSON>, "tau_grid": [0.05, 0.1, 0.2, 0.3]
//   }
//
// Interventional methods (dotears, notears-iv) see the regime-split dataset;
// observational methods (notears, golem-nv, sortnregress) see the matched-n
// pure-observational dataset (regime-0 rows if the scenario draws none).
// Scenario seeds are derived per (unit, replicate) from the sweep seed;
// sensitivity units share seeds across intervention models so model variants
// are paired draw-for-draw. Replicates may run on several threads; rows come
// back in deterministic (unit, replicate, method) order regardless of the
// thread count.

namespace ivdag::harness {

struct CvSpec {
  int folds = 5;
  std::vector<double> lambda_grid = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0};
};

struct CvCell {
  double lambda = 0.0;
  int fold = 0;
  double score = 0.0;
};

struct CvResult {
  double best_lambda = 0.0;
  std::vector<CvCell> table;
  std::vector<std::pair<double, double>> mean_scores;  // (lambda, mean score)
};

// Stratified k-fold cross-validation for the gradient methods. Rows of each
// regime are partitioned into folds independently (deterministic shuffle from
// `seed`). Per (fold, lambda): omega is estimated on the training folds (for
// dotears), the model is fit on the training folds, and the score is the
// unpenalized inverse-variance-weighted loss on the held-out fold with the
// training omega (identity for methods that do not estimate omega). Best
// lambda is the lowest mean score, ties to the smaller lambda. Throws
// StratificationError if any regime has fewer rows than folds.
CvResult kfold_cv(const InterventionalDataset& data, const objective::ObjectiveSpec& tmpl,
                  const CvSpec& cv, uint64_t seed, const solver::FitConfig& base_config);

struct SweepSpec {
  enum class Kind { TwoNode, ThreeNode, RandomGraph, Sensitivity, ThresholdStudy };
  Kind kind = Kind::RandomGraph;
  uint64_t seed = 1;
  int replicates = 1;
  std::vector<std::string> methods;
  double lambda = 0.1;
  std::optional<CvSpec> cv;
  bool cv_fresh_draw = false;
  double threshold = 0.3;

  std::vector<double> w_grid;
  std::vector<double> gamma_grid;
  double alpha = 4.0;
  long n_k = 1000;
  std::string three_node_topology = "chain";

  std::vector<simgen::ScenarioConfig> scenarios;

  std::optional<simgen::ScenarioConfig> base;
  std::vector<simgen::InterventionModel> models;

  std::optional<simgen::ScenarioConfig> scenario;
  std::vector<double> tau_grid;

  void validate() const;
};

SweepSpec parse_sweep_json(const std::string& text);
SweepSpec read_sweep_file(const std::string& path);

struct SweepRow {
  std::string scenario;
  int replicate = 0;
  std::string method;
  double lambda = 0.0;  // effective l1 weight (NaN for sortnregress)
  double threshold = 0.0;
  metrics::EvalReport report;
  double h_final = 0.0;  // NaN when the method has no acyclicity residual
  std::string status;
  std::optional<bool> orientation_correct;  // two-node sweeps only
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);

// run_sweep for a Sensitivity spec; named entry point for the suite.
std::vector<SweepRow> run_sensitivity(const SweepSpec& spec, int jobs = 1);

// CSV with a stable column set:
//   scenario,replicate,method,lambda,threshold,shd,l1,precision,recall,
//   h,status,orient_correct,timestamp
// NaN/absent fields are empty cells. The timestamp column is excluded from
// determinism comparisons.
void write_rows_csv(const std::vector<SweepRow>& rows, const std::string& path);
void write_cv_csv(const CvResult& cv, const std::string& path);

}  // namespace ivdag::harness
