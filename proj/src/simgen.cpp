#include "ivdag/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "ivdag/errors.hpp"
#include "ivdag/graph.hpp"
#include "ivdag/rng.hpp"
#include "ivdag/simd/kernels.hpp"

namespace ivdag::simgen {

std::string InterventionModel::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Hard:
      os << "hard";
      break;
    case Kind::Soft:
      os << "soft_pi=" << pi;
      break;
    case Kind::AlphaPerturbed:
      os << "alpha_perturbed_c=[" << c_lo << "," << c_hi << "]";
      break;
    case Kind::FixedShift:
      os << "fixed_shift_N(" << mean << "," << variance << ")";
      break;
  }
  return os.str();
}

void ScenarioConfig::validate() const {
  if (p < 1) throw InvalidInputError("scenario: p must be >= 1");
  if (auto* er = std::get_if<ErTopology>(&topology)) {
    if (er->edge_prob < 0.0 || er->edge_prob > 1.0) {
      throw InvalidInputError("scenario: ER edge_prob must be in [0,1]");
    }
  } else if (auto* sf = std::get_if<SfTopology>(&topology)) {
    if (sf->edges_per_node < 1) throw InvalidInputError("scenario: SF edges_per_node must be >= 1");
    if (sf->edges_per_node >= p) {
      throw InvalidInputError("scenario: SF edges_per_node must be < p");
    }
  } else {
    const auto& w0 = std::get<ExplicitTopology>(topology).w0;
    if (w0.rows() != p || w0.cols() != p) {
      throw InvalidInputError("scenario: explicit W has wrong shape");
    }
    graph::check_adjacency(w0);
  }
  if (!(weight_law.lo > 0.0) || weight_law.lo > weight_law.hi) {
    throw InvalidInputError("scenario: weight law requires 0 < lo <= hi");
  }
  if (auto* u = std::get_if<SigmaUniform>(&sigma_spec)) {
    if (!(u->lo > 0.0) || u->lo > u->hi) {
      throw InvalidInputError("scenario: sigma law requires 0 < lo <= hi");
    }
  } else {
    const auto& s = std::get<std::vector<double>>(sigma_spec);
    if (static_cast<int>(s.size()) != p) {
      throw InvalidInputError("scenario: explicit sigmas must have length p");
    }
    for (double v : s) {
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInputError("scenario: sigmas must be > 0");
    }
  }
  if (!(alpha > 0.0)) throw InvalidInputError("scenario: alpha must be > 0");
  if (model.kind == InterventionModel::Kind::Soft && (model.pi < 0.0 || model.pi >= 1.0)) {
    throw InvalidInputError("scenario: soft intervention pi must be in [0,1)");
  }
  if (model.kind == InterventionModel::Kind::AlphaPerturbed &&
      (!(model.c_lo > 0.0) || model.c_lo > model.c_hi)) {
    throw InvalidInputError("scenario: alpha perturbation requires 0 < c_lo <= c_hi");
  }
  if (model.kind == InterventionModel::Kind::FixedShift && !(model.variance > 0.0)) {
    throw InvalidInputError("scenario: fixed shift variance must be > 0");
  }
  if (n_k < 2) throw InvalidInputError("scenario: n_k must be >= 2 (variance needs two samples)");
  if (n_obs < 0) throw InvalidInputError("scenario: n_obs must be >= 0");
}

namespace {

using nlohmann::json;

InterventionModel parse_model(const json& j) {
  InterventionModel m;
  std::string kind = j.at("model").get<std::string>();
  if (kind == "hard") {
    m.kind = InterventionModel::Kind::Hard;
  } else if (kind == "soft") {
    m.kind = InterventionModel::Kind::Soft;
    m.pi = j.at("pi").get<double>();
  } else if (kind == "alpha_perturbed") {
    m.kind = InterventionModel::Kind::AlphaPerturbed;
    m.c_lo = j.at("c_lo").get<double>();
    m.c_hi = j.at("c_hi").get<double>();
  } else if (kind == "fixed_shift") {
    m.kind = InterventionModel::Kind::FixedShift;
    m.mean = j.at("mean").get<double>();
    m.variance = j.at("variance").get<double>();
  } else {
    throw ParseError("unknown intervention model '" + kind + "'");
  }
  return m;
}

json model_to_json(const InterventionModel& m) {
  json j;
  switch (m.kind) {
    case InterventionModel::Kind::Hard:
      j["model"] = "hard";
      break;
    case InterventionModel::Kind::Soft:
      j["model"] = "soft";
      j["pi"] = m.pi;
      break;
    case InterventionModel::Kind::AlphaPerturbed:
      j["model"] = "alpha_perturbed";
      j["c_lo"] = m.c_lo;
      j["c_hi"] = m.c_hi;
      break;
    case InterventionModel::Kind::FixedShift:
      j["model"] = "fixed_shift";
      j["mean"] = m.mean;
      j["variance"] = m.variance;
      break;
  }
  return j;
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    cfg.p = j.at("p").get<int>();
    const json& topo = j.at("topology");
    std::string type = topo.at("type").get<std::string>();
    if (type == "er") {
      cfg.topology = ErTopology{topo.at("edge_prob").get<double>()};
    } else if (type == "sf") {
      cfg.topology = SfTopology{topo.at("edges_per_node").get<int>()};
    } else if (type == "explicit") {
      const json& rows = topo.at("w");
      Matrix w(cfg.p, cfg.p);
      if (static_cast<int>(rows.size()) != cfg.p) throw ParseError("explicit W has wrong shape");
      for (int i = 0; i < cfg.p; ++i) {
        if (static_cast<int>(rows[i].size()) != cfg.p) throw ParseError("explicit W has wrong shape");
        for (int jj = 0; jj < cfg.p; ++jj) w(i, jj) = rows[i][jj].get<double>();
      }
      cfg.topology = ExplicitTopology{std::move(w)};
    } else {
      throw ParseError("unknown topology type '" + type + "'");
    }
    if (j.contains("weights")) {
      cfg.weight_law.lo = j["weights"].at("lo").get<double>();
      cfg.weight_law.hi = j["weights"].at("hi").get<double>();
    }
    if (j.contains("sigmas")) {
      if (j["sigmas"].is_array()) {
        cfg.sigma_spec = j["sigmas"].get<std::vector<double>>();
      } else {
        cfg.sigma_spec = SigmaUniform{j["sigmas"].at("lo").get<double>(),
                                      j["sigmas"].at("hi").get<double>()};
      }
    }
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("intervention")) cfg.model = parse_model(j["intervention"]);
    cfg.n_k = j.at("n_k").get<long>();
    cfg.n_obs = j.value("n_obs", 0L);
    cfg.seed = j.value("seed", 0ULL);
    cfg.name = j.value("name", std::string());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

InterventionModel parse_intervention_json(const std::string& json_text) {
  try {
    return parse_model(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad intervention JSON: ") + e.what());
  }
}

ScenarioConfig read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_json(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["p"] = cfg.p;
  if (auto* er = std::get_if<ErTopology>(&cfg.topology)) {
    j["topology"] = {{"type", "er"}, {"edge_prob", er->edge_prob}};
  } else if (auto* sf = std::get_if<SfTopology>(&cfg.topology)) {
    j["topology"] = {{"type", "sf"}, {"edges_per_node", sf->edges_per_node}};
  } else {
    const auto& w0 = std::get<ExplicitTopology>(cfg.topology).w0;
    json rows = json::array();
    for (int i = 0; i < w0.rows(); ++i) {
      json row = json::array();
      for (int jj = 0; jj < w0.cols(); ++jj) row.push_back(w0(i, jj));
      rows.push_back(row);
    }
    j["topology"] = {{"type", "explicit"}, {"w", rows}};
  }
  j["weights"] = {{"lo", cfg.weight_law.lo}, {"hi", cfg.weight_law.hi}};
  if (auto* u = std::get_if<SigmaUniform>(&cfg.sigma_spec)) {
    j["sigmas"] = {{"lo", u->lo}, {"hi", u->hi}};
  } else {
    j["sigmas"] = std::get<std::vector<double>>(cfg.sigma_spec);
  }
  j["alpha"] = cfg.alpha;
  j["intervention"] = model_to_json(cfg.model);
  j["n_obs"] = cfg.n_obs;
  j["n_k"] = cfg.n_k;
  j["seed"] = cfg.seed;
  if (!cfg.name.empty()) j["name"] = cfg.name;
  return j.dump();
}

Matrix sample_dag(const ScenarioConfig& cfg, uint64_t seed) {
  const int p = cfg.p;
  if (auto* ex = std::get_if<ExplicitTopology>(&cfg.topology)) {
    auto topo = graph::topological_order(graph::threshold(ex->w0, 0.0));
    if (!topo.acyclic) throw InvalidInputError("explicit W0 contains a cycle");
    return ex->w0;
  }

  Rng rng(streams::derive(seed, streams::kStructure));
  std::vector<std::pair<int, int>> edges;  // in attachment/permutation order

  if (auto* er = std::get_if<ErTopology>(&cfg.topology)) {
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (rng.uniform01() < er->edge_prob) edges.emplace_back(perm[i], perm[j]);
      }
    }
  } else {
    // Barabasi-Albert: each new node attaches z edges to existing nodes,
    // degree-proportionally; edges point from earlier- to later-attached.
    const int z = std::get<SfTopology>(cfg.topology).edges_per_node;
    std::vector<int> repeated;  // one entry per incident edge end
    std::vector<std::pair<int, int>> grown;
    for (int v = z; v < p; ++v) {
      std::vector<int> targets;
      if (repeated.empty()) {
        for (int u = 0; u < z; ++u) targets.push_back(u);
      } else {
        while (static_cast<int>(targets.size()) < z) {
          int u = repeated[static_cast<size_t>(rng.bounded(repeated.size()))];
          if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
        }
      }
      for (int u : targets) {
        grown.emplace_back(u, v);
        repeated.push_back(u);
        repeated.push_back(v);
      }
    }
    // Relabel so node index carries no attachment-order information.
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (const auto& [u, v] : grown) edges.emplace_back(perm[u], perm[v]);
  }

  Matrix w(p, p);
  for (const auto& [i, j] : edges) {
    double mag = rng.uniform(cfg.weight_law.lo, cfg.weight_law.hi);
    double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
    w(i, j) = sign * mag;
  }
  return w;
}

std::vector<double> sample_sigmas(const ScenarioConfig& cfg, uint64_t seed) {
  if (auto* ex = std::get_if<std::vector<double>>(&cfg.sigma_spec)) return *ex;
  const auto& u = std::get<SigmaUniform>(cfg.sigma_spec);
  Rng rng(streams::derive(seed, streams::kSigma));
  std::vector<double> sigmas(cfg.p);
  for (auto& s : sigmas) s = rng.uniform(u.lo, u.hi);
  return sigmas;
}

DataMatrix sample_regime(const Matrix& w0, const std::vector<double>& sigmas, int regime, long n,
                         double alpha, const InterventionModel& model, uint64_t seed,
                         uint64_t dataset_tag) {
  const int p = w0.rows();
  if (static_cast<int>(sigmas.size()) != p) throw InvalidInputError("sample_regime: sigma length");
  if (regime < 0 || regime > p) throw InvalidInputError("sample_regime: regime out of range");
  auto topo = graph::topological_order(graph::threshold(w0, 0.0));
  if (!topo.acyclic) throw InvalidInputError("sample_regime: W0 contains a cycle");

  const int target = regime - 1;  // node index; -1 for observational

  double c_k = 1.0;
  if (regime > 0 && model.kind == InterventionModel::Kind::AlphaPerturbed) {
    Rng prng(streams::derive(seed, streams::kRegimeParam, dataset_tag, static_cast<uint64_t>(regime)));
    c_k = prng.uniform(model.c_lo, model.c_hi);
  }

  DataMatrix x(n, p);
  for (int j : topo.order) {
    Rng rng(streams::derive(seed, streams::kNoise, dataset_tag, static_cast<uint64_t>(regime),
                            static_cast<uint64_t>(j)));
    double* xj = x.col(j);
    const bool treated = (j == target);

    if (treated && model.kind == InterventionModel::Kind::FixedShift) {
      const double sd = std::sqrt(model.variance);
      for (long i = 0; i < n; ++i) xj[i] = model.mean + sd * rng.normal();
      continue;
    }

    double sd = sigmas[j];
    if (treated) {
      sd /= alpha;
      if (model.kind == InterventionModel::Kind::AlphaPerturbed) sd /= c_k;
    }
    for (long i = 0; i < n; ++i) xj[i] = sd * rng.normal();

    // Parental term. Hard (and alpha-perturbed, fixed-shift) interventions
    // sever incoming edges; soft interventions attenuate them by sqrt(pi).
    double parent_scale = 1.0;
    if (treated) {
      if (model.kind == InterventionModel::Kind::Soft) {
        parent_scale = std::sqrt(model.pi);
      } else {
        parent_scale = 0.0;
      }
    }
    if (parent_scale != 0.0) {
      for (int i = 0; i < p; ++i) {
        const double w = w0(i, j);
        if (w != 0.0) simd::axpy(parent_scale * w, x.col(i), xj, static_cast<size_t>(n));
      }
    }
  }
  return x;
}

SimulatedData sample_dataset(const ScenarioConfig& cfg) {
  cfg.validate();
  SimulatedData out;
  out.w_true = sample_dag(cfg, cfg.seed);
  out.sigmas = sample_sigmas(cfg, cfg.seed);

  out.interventional.p = cfg.p;
  for (int k = 0; k <= cfg.p; ++k) {
    out.interventional.regimes.push_back(
        {k, sample_regime(out.w_true, out.sigmas, k, cfg.n_k, cfg.alpha, cfg.model, cfg.seed,
                          streams::kInterventionalData)});
  }
  if (cfg.n_obs > 0) {
    out.observational = sample_regime(out.w_true, out.sigmas, 0, cfg.n_obs, cfg.alpha, cfg.model,
                                      cfg.seed, streams::kObservationalData);
  }
  return out;
}

}  // namespace ivdag::simgen
