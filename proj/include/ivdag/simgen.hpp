#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ivdag/dataset.hpp"
#include "ivdag/matrix.hpp"

// Random-DAG generation and linear-SEM sampling across intervention regimes.
//
// A scenario is a JSON document:
//
//   {
//     "p": 20,
//     "topology": {"type": "er", "edge_prob": 0.1}
//                 | {"type": "sf", "edges_per_node": 2}
//                 | {"type": "explicit", "w": [[...], ...]},
//     "weights": {"lo": 0.5, "hi": 2.0},          // |w| ~ Unif, sign fair coin
//     "sigmas": {"lo": 0.5, "hi": 2.0}            // sd ~ Unif per node
//               | [0.7, 1.1, ...],                // explicit per-node sds
//     "alpha": 4.0,
//     "intervention": {"model": "hard"}
//                     | {"model": "soft", "pi": 0.25}
//                     | {"model": "alpha_perturbed", "c_lo": 0.8, "c_hi": 1.2}
//                     | {"model": "fixed_shift", "mean": 2.0, "variance": 1.0},
//     "n_obs": 2100,   // rows of the separate pure-observational dataset (0 = none)
//     "n_k": 100,      // rows per regime of the interventional dataset
//     "seed": 1,
//     "name": "er01_strong"   // optional id used in sweep output
//   }

namespace ivdag::simgen {

struct ErTopology {
  double edge_prob = 0.0;
};
struct SfTopology {
  int edges_per_node = 1;
};
struct ExplicitTopology {
  Matrix w0;
};
using Topology = std::variant<ErTopology, SfTopology, ExplicitTopology>;

struct WeightLaw {
  double lo = 0.5;
  double hi = 2.0;
};

struct SigmaUniform {
  double lo = 0.5;
  double hi = 2.0;
};
using SigmaSpec = std::variant<SigmaUniform, std::vector<double>>;

struct InterventionModel {
  enum class Kind { Hard, Soft, AlphaPerturbed, FixedShift };
  Kind kind = Kind::Hard;
  double pi = 0.0;           // Soft: retained fraction of parental variance
  double c_lo = 0.8;         // AlphaPerturbed: c_k ~ Unif[c_lo, c_hi]
  double c_hi = 1.2;
  double mean = 2.0;         // FixedShift: target ~ Normal(mean, variance)
  double variance = 1.0;

  std::string label() const;
};

struct ScenarioConfig {
  Topology topology;
  int p = 0;
  WeightLaw weight_law;
  SigmaSpec sigma_spec = SigmaUniform{};
  double alpha = 1.0;
  InterventionModel model;
  long n_obs = 0;
  long n_k = 0;
  uint64_t seed = 0;
  std::string name;

  void validate() const;
};

ScenarioConfig parse_scenario_json(const std::string& json_text);
ScenarioConfig read_scenario_file(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

// Parses one intervention block (the "intervention" object above).
InterventionModel parse_intervention_json(const std::string& json_text);

// Draws only the structure: W0 with acyclic support and signed weights. ER
// places edges on the strict upper triangle of a uniformly random node
// permutation; SF grows a preferential-attachment DAG oriented from earlier-
// to later-attached nodes, then relabels nodes by a random permutation so
// node index carries no ordering information in either topology.
Matrix sample_dag(const ScenarioConfig& cfg, uint64_t seed);

std::vector<double> sample_sigmas(const ScenarioConfig& cfg, uint64_t seed);

// One regime by ancestral sampling in topological order. Regime 0 never
// consults the intervention model. `dataset_tag` selects an independent noise
// stream family (interventional vs pure-observational draws).
DataMatrix sample_regime(const Matrix& w0, const std::vector<double>& sigmas, int regime, long n,
                         double alpha, const InterventionModel& model, uint64_t seed,
                         uint64_t dataset_tag);

struct SimulatedData {
  InterventionalDataset interventional;  // regimes 0..p, n_k rows each
  DataMatrix observational;              // n_obs rows (empty when n_obs == 0)
  Matrix w_true;
  std::vector<double> sigmas;
};

SimulatedData sample_dataset(const ScenarioConfig& cfg);

}  // namespace ivdag::simgen
