#include "ivdag/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ivdag/baselines.hpp"
#include "ivdag/errors.hpp"
#include "ivdag/io_detail.hpp"
#include "ivdag/rng.hpp"
#include "ivdag/variance.hpp"

namespace ivdag::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_gradient_method(const std::string& m) { return m != "sortnregress"; }

bool uses_interventional(const std::string& m) { return m == "dotears" || m == "notears-iv"; }

}  // namespace

CvResult kfold_cv(const InterventionalDataset& data, const objective::ObjectiveSpec& tmpl,
                  const CvSpec& cv, uint64_t seed, const solver::FitConfig& base_config) {
  data.validate();
  if (cv.folds < 2) throw InvalidInputError("cv: folds must be >= 2");
  if (cv.lambda_grid.empty()) throw InvalidInputError("cv: empty lambda grid");
  for (const auto& reg : data.regimes) {
    if (reg.data.n() < cv.folds) {
      throw StratificationError("regime " + std::to_string(reg.k) + " has " +
                                std::to_string(reg.data.n()) + " rows < " +
                                std::to_string(cv.folds) + " folds");
    }
  }

  // Fold labels per regime: shuffled row order, folds assigned round-robin.
  std::vector<std::vector<int>> fold_of(data.regimes.size());
  for (size_t r = 0; r < data.regimes.size(); ++r) {
    const long n = data.regimes[r].data.n();
    std::vector<long> perm(n);
    std::iota(perm.begin(), perm.end(), 0L);
    Rng rng(streams::derive(seed, streams::kFolds, static_cast<uint64_t>(data.regimes[r].k)));
    rng.shuffle(perm);
    fold_of[r].resize(n);
    for (long i = 0; i < n; ++i) fold_of[r][perm[i]] = static_cast<int>(i % cv.folds);
  }

  CvResult result;
  std::vector<double> sums(cv.lambda_grid.size(), 0.0);
  for (int f = 0; f < cv.folds; ++f) {
    InterventionalDataset train, test;
    train.p = test.p = data.p;
    for (size_t r = 0; r < data.regimes.size(); ++r) {
      std::vector<long> train_rows, test_rows;
      const long n = data.regimes[r].data.n();
      for (long i = 0; i < n; ++i) {
        (fold_of[r][i] == f ? test_rows : train_rows).push_back(i);
      }
      train.regimes.push_back({data.regimes[r].k, data.regimes[r].data.select_rows(train_rows)});
      test.regimes.push_back({data.regimes[r].k, data.regimes[r].data.select_rows(test_rows)});
    }

    variance::OmegaEstimate score_omega = variance::identity_omega(data.p);
    objective::ObjectiveSpec spec = tmpl;
    if (tmpl.method == objective::Method::Dotears) {
      spec.omega = variance::estimate_omega(train);
      score_omega = spec.omega;
    }
    for (size_t li = 0; li < cv.lambda_grid.size(); ++li) {
      spec.lambda1 = cv.lambda_grid[li];
      solver::FitResult fit = solver::fit(train, spec, base_config);
      double score;
      if (uses_interventional(objective::method_name(spec.method))) {
        score = objective::dotears_value(fit.w_hat, test, score_omega);
      } else {
        InterventionalDataset test_obs;
        test_obs.p = data.p;
        test_obs.regimes.push_back({0, *test.find(0)});
        score = objective::dotears_value(fit.w_hat, test_obs, score_omega);
      }
      result.table.push_back({cv.lambda_grid[li], f, score});
      sums[li] += score;
    }
  }

  double best = std::numeric_limits<double>::infinity();
  double best_lambda = cv.lambda_grid.front();
  for (size_t li = 0; li < cv.lambda_grid.size(); ++li) {
    const double mean = sums[li] / cv.folds;
    result.mean_scores.emplace_back(cv.lambda_grid[li], mean);
    if (mean < best || (mean == best && cv.lambda_grid[li] < best_lambda)) {
      best = mean;
      best_lambda = cv.lambda_grid[li];
    }
  }
  result.best_lambda = best_lambda;
  return result;
}

void SweepSpec::validate() const {
  if (replicates < 1) throw InvalidInputError("sweep: replicates must be >= 1");
  if (methods.empty()) throw InvalidInputError("sweep: no methods");
  for (const auto& m : methods) {
    if (m != "sortnregress") objective::method_from_name(m);  // throws on unknown
  }
  switch (kind) {
    case Kind::TwoNode:
    case Kind::ThreeNode:
      if (w_grid.empty() || gamma_grid.empty()) throw InvalidInputError("sweep: empty grid");
      if (kind == Kind::ThreeNode && three_node_topology != "chain" &&
          three_node_topology != "collider" && three_node_topology != "fork") {
        throw InvalidInputError("sweep: unknown three-node topology '" + three_node_topology + "'");
      }
      break;
    case Kind::RandomGraph:
      if (scenarios.empty()) throw InvalidInputError("sweep: no scenarios");
      for (const auto& s : scenarios) s.validate();
      break;
    case Kind::Sensitivity:
      if (!base || models.empty()) throw InvalidInputError("sweep: sensitivity needs base+models");
      base->validate();
      break;
    case Kind::ThresholdStudy:
      if (!scenario || tau_grid.empty()) {
        throw InvalidInputError("sweep: threshold study needs scenario+tau_grid");
      }
      scenario->validate();
      break;
  }
}

SweepSpec parse_sweep_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sweep JSON: ") + e.what());
  }
  SweepSpec spec;
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "two_node") {
      spec.kind = SweepSpec::Kind::TwoNode;
    } else if (kind == "three_node") {
      spec.kind = SweepSpec::Kind::ThreeNode;
    } else if (kind == "random_graph") {
      spec.kind = SweepSpec::Kind::RandomGraph;
    } else if (kind == "sensitivity") {
      spec.kind = SweepSpec::Kind::Sensitivity;
    } else if (kind == "threshold_study") {
      spec.kind = SweepSpec::Kind::ThresholdStudy;
    } else {
      throw ParseError("unknown sweep kind '" + kind + "'");
    }
    spec.seed = j.value("seed", 1ULL);
    spec.replicates = j.value("replicates", 1);
    spec.methods = j.at("methods").get<std::vector<std::string>>();
    spec.lambda = j.value("lambda", 0.1);
    if (j.contains("cv")) {
      CvSpec cv;
      cv.folds = j["cv"].value("folds", 5);
      if (j["cv"].contains("lambda_grid")) {
        cv.lambda_grid = j["cv"]["lambda_grid"].get<std::vector<double>>();
      }
      spec.cv = cv;
    }
    spec.cv_fresh_draw = j.value("cv_fresh_draw", false);
    spec.threshold = j.value("threshold", 0.3);
    if (j.contains("w_grid")) spec.w_grid = j["w_grid"].get<std::vector<double>>();
    if (j.contains("gamma_grid")) spec.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
    spec.alpha = j.value("alpha", 4.0);
    spec.n_k = j.value("n_k", 1000L);
    spec.three_node_topology = j.value("topology", std::string("chain"));
    if (j.contains("scenarios")) {
      for (const auto& s : j["scenarios"]) {
        spec.scenarios.push_back(simgen::parse_scenario_json(s.dump()));
      }
    }
    if (j.contains("base")) spec.base = simgen::parse_scenario_json(j["base"].dump());
    if (j.contains("models")) {
      for (const auto& m : j["models"]) {
        spec.models.push_back(simgen::parse_intervention_json(m.dump()));
      }
    }
    if (j.contains("scenario")) spec.scenario = simgen::parse_scenario_json(j["scenario"].dump());
    if (j.contains("tau_grid")) spec.tau_grid = j["tau_grid"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sweep JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

SweepSpec read_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sweep file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_json(ss.str());
}

namespace {

Matrix three_node_truth(const std::string& topology, double w) {
  Matrix w0(3, 3);
  if (topology == "chain") {
    w0(0, 1) = w;
    w0(1, 2) = w;
  } else if (topology == "collider") {
    w0(0, 2) = w;
    w0(1, 2) = w;
  } else {
    w0(0, 1) = w;
    w0(0, 2) = w;
  }
  return w0;
}

int unit_count(const SweepSpec& spec) {
  switch (spec.kind) {
    case SweepSpec::Kind::TwoNode:
    case SweepSpec::Kind::ThreeNode:
      return static_cast<int>(spec.w_grid.size() * spec.gamma_grid.size());
    case SweepSpec::Kind::RandomGraph:
      return static_cast<int>(spec.scenarios.size());
    case SweepSpec::Kind::Sensitivity:
      return static_cast<int>(spec.models.size());
    case SweepSpec::Kind::ThresholdStudy:
      return 1;
  }
  return 0;
}

struct UnitScenario {
  simgen::ScenarioConfig cfg;
  std::string id;
};

UnitScenario unit_scenario(const SweepSpec& spec, int unit, int replicate) {
  UnitScenario us;
  // Sensitivity units share replicate seeds across models, so intervention
  // variants are paired draw-for-draw; everywhere else the unit participates.
  const uint64_t unit_key =
      spec.kind == SweepSpec::Kind::Sensitivity ? 0 : static_cast<uint64_t>(unit);
  const uint64_t rep_seed = streams::derive(spec.seed, streams::kReplicate, unit_key,
                                            static_cast<uint64_t>(replicate));
  switch (spec.kind) {
    case SweepSpec::Kind::TwoNode:
    case SweepSpec::Kind::ThreeNode: {
      const size_t gi = static_cast<size_t>(unit) % spec.gamma_grid.size();
      const size_t wi = static_cast<size_t>(unit) / spec.gamma_grid.size();
      const double w = spec.w_grid[wi];
      const double gamma = spec.gamma_grid[gi];
      simgen::ScenarioConfig cfg;
      std::ostringstream id;
      if (spec.kind == SweepSpec::Kind::TwoNode) {
        cfg.p = 2;
        Matrix w0(2, 2);
        w0(0, 1) = w;
        cfg.topology = simgen::ExplicitTopology{std::move(w0)};
        cfg.sigma_spec = std::vector<double>{std::sqrt(gamma), 1.0};
      } else {
        cfg.p = 3;
        cfg.topology = simgen::ExplicitTopology{three_node_truth(spec.three_node_topology, w)};
        cfg.sigma_spec = std::vector<double>{std::sqrt(gamma), 1.0, 1.0};
        id << spec.three_node_topology << ",";
      }
      cfg.alpha = spec.alpha;
      cfg.n_k = spec.n_k;
      cfg.n_obs = (cfg.p + 1) * spec.n_k;
      cfg.seed = rep_seed;
      us.cfg = std::move(cfg);
      id << "w=" << w << ",gamma=" << gamma;
      us.id = id.str();
      return us;
    }
    case SweepSpec::Kind::RandomGraph: {
      us.cfg = spec.scenarios[unit];
      us.cfg.seed = rep_seed;
      us.id = us.cfg.name.empty() ? "scenario" + std::to_string(unit) : us.cfg.name;
      return us;
    }
    case SweepSpec::Kind::Sensitivity: {
      us.cfg = *spec.base;
      us.cfg.model = spec.models[unit];
      us.cfg.seed = rep_seed;
      us.id = us.cfg.model.label();
      return us;
    }
    case SweepSpec::Kind::ThresholdStudy: {
      us.cfg = *spec.scenario;
      us.cfg.seed = rep_seed;
      us.id = us.cfg.name.empty() ? "threshold_study" : us.cfg.name;
      return us;
    }
  }
  throw Error("internal: unit_scenario");
}

struct MethodOutcome {
  Matrix w_hat;
  double h_final = kNaN;
  double lambda_eff = kNaN;
  std::string status = "ok";
  bool failed = false;
};

const DataMatrix& observational_of(const simgen::SimulatedData& sim) {
  if (sim.observational.n() > 0) return sim.observational;
  const DataMatrix* obs = sim.interventional.find(0);
  if (!obs) throw InvalidInputError("scenario draws no observational rows");
  return *obs;
}

MethodOutcome run_method(const std::string& method, const simgen::SimulatedData& sim,
                         const simgen::ScenarioConfig& cfg, const SweepSpec& spec,
                         uint64_t task_seed) {
  MethodOutcome out;
  try {
    if (method == "sortnregress") {
      out.w_hat = baselines::sortnregress(observational_of(sim));
      return out;
    }
    objective::ObjectiveSpec ospec;
    ospec.method = objective::method_from_name(method);
    ospec.lambda1 = spec.lambda;
    if (ospec.method == objective::Method::Dotears) {
      ospec.omega = variance::estimate_omega(sim.interventional);
    }
    solver::FitConfig config;

    if (spec.cv.has_value()) {
      // CV sees either this draw or, with cv_fresh_draw, a fresh draw of the
      // same scenario (the paper-style protocol); the chosen lambda then
      // applies to the original data either way.
      const simgen::SimulatedData* cv_sim = &sim;
      simgen::SimulatedData fresh;
      if (spec.cv_fresh_draw) {
        simgen::ScenarioConfig cv_cfg = cfg;
        cv_cfg.seed = streams::derive(task_seed, 0xC5u);
        fresh = simgen::sample_dataset(cv_cfg);
        cv_sim = &fresh;
      }
      InterventionalDataset obs_wrap;
      const InterventionalDataset* cv_data = &cv_sim->interventional;
      if (!uses_interventional(method)) {
        obs_wrap.p = cv_sim->interventional.p;
        obs_wrap.regimes.push_back({0, observational_of(*cv_sim)});
        cv_data = &obs_wrap;
      }
      CvResult cvr = kfold_cv(*cv_data, ospec, *spec.cv, task_seed, config);
      ospec.lambda1 = cvr.best_lambda;
    }
    out.lambda_eff = ospec.lambda1;

    solver::FitResult fit = uses_interventional(method)
                                ? solver::fit(sim.interventional, ospec, config)
                                : solver::fit(observational_of(sim), ospec, config);
    out.w_hat = fit.w_hat;
    out.h_final = fit.h_final;
    out.status = solver::to_string(fit.status);
  } catch (const std::exception& e) {
    out.failed = true;
    out.status = std::string("error: ") + e.what();
    out.w_hat = Matrix();
  }
  return out;
}

std::vector<SweepRow> run_task(const SweepSpec& spec, int unit, int replicate) {
  UnitScenario us = unit_scenario(spec, unit, replicate);
  simgen::SimulatedData sim = simgen::sample_dataset(us.cfg);
  const uint64_t task_seed = us.cfg.seed;

  std::vector<SweepRow> rows;
  for (const auto& method : spec.methods) {
    MethodOutcome mo = run_method(method, sim, us.cfg, spec, task_seed);
    std::vector<double> taus = spec.kind == SweepSpec::Kind::ThresholdStudy
                                   ? spec.tau_grid
                                   : std::vector<double>{spec.threshold};
    for (double tau : taus) {
      SweepRow row;
      row.scenario = us.id;
      row.replicate = replicate;
      row.method = method;
      row.lambda = mo.lambda_eff;
      row.threshold = tau;
      row.h_final = mo.h_final;
      row.status = mo.status;
      if (mo.failed) {
        row.report.shd = -1;
        row.report.l1 = kNaN;
        row.report.precision = kNaN;
        row.report.recall = kNaN;
      } else {
        row.report = metrics::evaluate(mo.w_hat, sim.w_true, tau);
        if (spec.kind == SweepSpec::Kind::TwoNode) {
          row.orientation_correct =
              std::fabs(mo.w_hat(0, 1)) > std::fabs(mo.w_hat(1, 0));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  const int units = unit_count(spec);
  const int reps = spec.replicates;
  const int n_tasks = units * reps;
  std::vector<std::vector<SweepRow>> slots(static_cast<size_t>(n_tasks));

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int t = 0; t < n_tasks; ++t) slots[t] = run_task(spec, t / reps, t % reps);
  } else {
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;
    auto worker = [&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= n_tasks || failed.load()) break;
        try {
          slots[t] = run_task(spec, t / reps, t % reps);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) throw Error("sweep worker failed: " + first_error);
  }

  std::vector<SweepRow> rows;
  for (auto& slot : slots) {
    for (auto& row : slot) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> run_sensitivity(const SweepSpec& spec, int jobs) {
  if (spec.kind != SweepSpec::Kind::Sensitivity) {
    throw InvalidInputError("run_sensitivity: spec kind must be 'sensitivity'");
  }
  return run_sweep(spec, jobs);
}

namespace {

std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  return io_detail::format_double(v);
}

}  // namespace

void write_rows_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write CSV: " + path);
  char stamp[32];
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  out << "scenario,replicate,method,lambda,threshold,shd,l1,precision,recall,h,status,"
         "orient_correct,timestamp\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.replicate << ',' << r.method << ',' << csv_num(r.lambda) << ','
        << csv_num(r.threshold) << ',';
    if (r.report.shd >= 0) out << r.report.shd;
    out << ',' << csv_num(r.report.l1) << ',' << csv_num(r.report.precision) << ','
        << csv_num(r.report.recall) << ',' << csv_num(r.h_final) << ',' << r.status << ',';
    if (r.orientation_correct.has_value()) out << (*r.orientation_correct ? 1 : 0);
    out << ',' << stamp << '\n';
  }
}

void write_cv_csv(const CvResult& cv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write CSV: " + path);
  out << "lambda,fold,score\n";
  for (const auto& cell : cv.table) {
    out << io_detail::format_double(cell.lambda) << ',' << cell.fold << ','
        << io_detail::format_double(cell.score) << '\n';
  }
  out << "\nlambda,mean_score,best\n";
  for (const auto& [lambda, mean] : cv.mean_scores) {
    out << io_detail::format_double(lambda) << ',' << io_detail::format_double(mean) << ','
        << (lambda == cv.best_lambda ? 1 : 0) << '\n';
  }
}

}  // namespace ivdag::harness
