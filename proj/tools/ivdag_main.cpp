// ivdag command-line interface. Subcommands wrap single library calls:
//   simulate  draw a scenario into a dataset directory
//   fit       estimate a weighted adjacency matrix from a dataset
//   cv        k-fold cross-validation over the lambda grid
//   eval      compare an estimate against a ground-truth matrix
//   sweep     run a sweep spec into a CSV of evaluation rows
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver did not
// converge (output is still written). IVDAG_LOG={warn,info,debug} controls
// stderr verbosity only.

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "ivdag/baselines.hpp"
#include "ivdag/dataset.hpp"
#include "ivdag/errors.hpp"
#include "ivdag/graph.hpp"
#include "ivdag/harness.hpp"
#include "ivdag/io_detail.hpp"
#include "ivdag/metrics.hpp"
#include "ivdag/objective.hpp"
#include "ivdag/simgen.hpp"
#include "ivdag/solver.hpp"
#include "ivdag/variance.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ivdag;

int g_log_level = 0;  // 0 warn, 1 info, 2 debug

void init_log_level() {
  const char* env = std::getenv("IVDAG_LOG");
  if (!env) return;
  if (!std::strcmp(env, "info") || !std::strcmp(env, "1")) g_log_level = 1;
  if (!std::strcmp(env, "debug") || !std::strcmp(env, "2")) g_log_level = 2;
}

void warn(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }
void info(const std::string& msg) {
  if (g_log_level >= 1) std::cerr << "[info] " << msg << "\n";
}

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

// Observational rows for methods that ignore interventions: prefers
// observational.tsv, falls back to the regime-0 rows of data.tsv (warning
// when interventional regimes get dropped).
const DataMatrix& observational_rows(const io::DatasetDir& dir) {
  if (dir.observational.has_value()) return *dir.observational;
  if (dir.interventional.regimes.size() > 1) {
    warn("observational-only method: using regime-0 rows, ignoring interventional regimes");
  }
  return solver::observational_matrix(dir.interventional);
}

// First ceil(f*n) rows of each regime estimate omega, the rest feed the fit.
void split_dataset(const InterventionalDataset& data, double fraction,
                   InterventionalDataset& omega_part, InterventionalDataset& fit_part) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw InvalidInputError("--split-fraction must be in (0,1)");
  }
  omega_part.p = fit_part.p = data.p;
  for (const auto& reg : data.regimes) {
    const long n = reg.data.n();
    const long cut = static_cast<long>(std::ceil(fraction * static_cast<double>(n)));
    if (cut < 2 || n - cut < 1) {
      throw DegenerateDataError("regime " + std::to_string(reg.k) +
                                " too small for --split-fraction " + std::to_string(fraction));
    }
    std::vector<long> head(cut), tail(n - cut);
    for (long i = 0; i < cut; ++i) head[i] = i;
    for (long i = cut; i < n; ++i) tail[i - cut] = i;
    omega_part.regimes.push_back({reg.k, reg.data.select_rows(head)});
    fit_part.regimes.push_back({reg.k, reg.data.select_rows(tail)});
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed) {
  simgen::ScenarioConfig cfg = simgen::read_scenario_file(config_path);
  if (seed.has_value()) cfg.seed = *seed;
  simgen::SimulatedData sim = simgen::sample_dataset(cfg);

  fs::create_directories(out_dir);
  fs::path base(out_dir);
  io::write_dataset(sim.interventional, (base / "data.tsv").string());
  if (sim.observational.n() > 0) {
    InterventionalDataset obs;
    obs.p = cfg.p;
    obs.regimes.push_back({0, sim.observational});
    io::write_dataset(obs, (base / "observational.tsv").string());
  }
  graph::write_adjacency_tsv(sim.w_true, (base / "w_true.tsv").string());

  io::DatasetMeta meta;
  meta.p = cfg.p;
  for (const auto& reg : sim.interventional.regimes) {
    meta.regime_counts.emplace_back(reg.k, reg.data.n());
  }
  meta.seed = cfg.seed;
  meta.scenario_json = simgen::scenario_to_json(cfg);
  meta.truth_path = "w_true.tsv";
  meta.sigmas = sim.sigmas;
  io::write_meta(meta, (base / "meta.json").string());
  info("simulated " + std::to_string(sim.interventional.total_rows()) + " interventional rows");
  return 0;
}

int cmd_fit(const std::string& data_dir, const std::string& method, double lambda,
            const std::string& omega_arg, std::optional<double> tau,
            std::optional<double> split_fraction, const std::string& omega_out,
            const std::string& out_path) {
  io::DatasetDir dir = io::load_dataset_dir(data_dir);

  Matrix w_hat;
  int exit_code = 0;
  if (method == "sortnregress") {
    w_hat = baselines::sortnregress(observational_rows(dir));
  } else {
    objective::ObjectiveSpec spec;
    spec.method = objective::method_from_name(method);
    spec.lambda1 = lambda;
    solver::FitConfig config;

    solver::FitResult res;
    if (spec.method == objective::Method::Dotears ||
        spec.method == objective::Method::NotearsInterventional) {
      const InterventionalDataset* fit_data = &dir.interventional;
      InterventionalDataset omega_part, fit_part;
      if (split_fraction.has_value()) {
        split_dataset(dir.interventional, *split_fraction, omega_part, fit_part);
        fit_data = &fit_part;
      }
      if (spec.method == objective::Method::Dotears) {
        if (omega_arg == "estimate") {
          spec.omega = variance::estimate_omega(split_fraction ? omega_part : dir.interventional);
        } else if (omega_arg == "identity") {
          spec.omega = variance::identity_omega(dir.interventional.p);
        } else {
          spec.omega = variance::read_omega_tsv(omega_arg);
        }
        if (!omega_out.empty()) variance::write_omega_tsv(spec.omega, omega_out);
      }
      res = solver::fit(*fit_data, spec, config);
    } else {
      res = solver::fit(observational_rows(dir), spec, config);
    }
    w_hat = res.w_hat;
    info("fit: " + std::string(solver::to_string(res.status)) + ", h=" +
         io_detail::format_double(res.h_final) + ", outer=" + std::to_string(res.outer_iters));
    if (res.status != solver::FitStatus::Converged) {
      warn("solver did not converge (" + std::string(solver::to_string(res.status)) +
           "); writing result anyway");
      exit_code = kExitNotConverged;
    }
  }

  if (tau.has_value()) {
    std::vector<std::pair<int, int>> removed;
    w_hat = graph::postprocess(std::move(w_hat), *tau, &removed);
    for (const auto& [i, j] : removed) {
      warn("cycle repair removed edge " + std::to_string(i + 1) + "->" + std::to_string(j + 1));
    }
  }
  graph::write_adjacency_tsv(w_hat, out_path);
  return exit_code;
}

int cmd_cv(const std::string& data_dir, const std::string& method, int folds,
           const std::vector<double>& lambda_grid, uint64_t seed, const std::string& out_path) {
  if (method == "sortnregress") {
    throw InvalidInputError("cv applies to the gradient methods only");
  }
  io::DatasetDir dir = io::load_dataset_dir(data_dir);
  objective::ObjectiveSpec spec;
  spec.method = objective::method_from_name(method);

  harness::CvSpec cv;
  cv.folds = folds;
  if (!lambda_grid.empty()) cv.lambda_grid = lambda_grid;

  InterventionalDataset obs_wrap;
  const InterventionalDataset* data = &dir.interventional;
  if (spec.method == objective::Method::LeastSquaresObs ||
      spec.method == objective::Method::GolemProfileObs) {
    obs_wrap.p = dir.interventional.p;
    obs_wrap.regimes.push_back({0, observational_rows(dir)});
    data = &obs_wrap;
  }
  const uint64_t cv_seed = seed != 0 ? seed : dir.meta.seed;
  harness::CvResult res = harness::kfold_cv(*data, spec, cv, cv_seed, solver::FitConfig{});
  harness::write_cv_csv(res, out_path);
  std::cout << "best_lambda " << io_detail::format_double(res.best_lambda) << "\n";
  return 0;
}

int cmd_eval(const std::string& est_path, const std::string& truth_path, double tau,
             const std::string& out_path) {
  Matrix est = graph::read_adjacency_tsv(est_path);
  Matrix truth = graph::read_adjacency_tsv(truth_path);
  metrics::EvalReport rep = metrics::evaluate(est, truth, tau);
  std::ostringstream row;
  row << est_path << ',' << truth_path << ',' << io_detail::format_double(tau) << ',' << rep.shd
      << ',' << io_detail::format_double(rep.l1) << ','
      << (std::isnan(rep.precision) ? "" : io_detail::format_double(rep.precision)) << ','
      << (std::isnan(rep.recall) ? "" : io_detail::format_double(rep.recall)) << ','
      << rep.n_true_edges << ',' << rep.n_called_edges;
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write report: " + out_path);
  out << "est,truth,threshold,shd,l1,precision,recall,n_true_edges,n_called_edges\n"
      << row.str() << '\n';
  std::cout << row.str() << "\n";
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, int jobs,
              bool cv_fresh_draw) {
  harness::SweepSpec spec = harness::read_sweep_file(spec_path);
  if (cv_fresh_draw) spec.cv_fresh_draw = true;
  auto rows = harness::run_sweep(spec, jobs);
  harness::write_rows_csv(rows, out_path);
  info("wrote " + std::to_string(rows.size()) + " rows to " + out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"DAG structure learning from observational and interventional data"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a scenario into a dataset directory");
  std::string sim_config, sim_out;
  uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  sim->add_option("--config", sim_config, "scenario JSON")->required();
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--seed", sim_seed, "override the scenario seed")
      ->each([&](const std::string&) { sim_seed_set = true; });

  // fit
  auto* fit = app.add_subcommand("fit", "fit a weighted adjacency matrix");
  std::string fit_data, fit_method, fit_omega = "estimate", fit_out, fit_omega_out;
  double fit_lambda = 0.1;  // the default l1 weight used throughout
  double fit_tau = 0.0, fit_split = 0.0;
  bool fit_tau_set = false, fit_split_set = false;
  fit->add_option("--data", fit_data, "dataset directory")->required();
  fit->add_option("--method", fit_method, "dotears|notears|notears-iv|golem-nv|sortnregress")
      ->required()
      ->check(CLI::IsMember({"dotears", "notears", "notears-iv", "golem-nv", "sortnregress"}));
  fit->add_option("--lambda", fit_lambda, "l1 weight (default 0.1)");
  fit->add_option("--omega", fit_omega, "estimate|identity|FILE (dotears only)");
  fit->add_option("--threshold", fit_tau, "zero entries with |w| <= tau, repair cycles")
      ->each([&](const std::string&) { fit_tau_set = true; });
  fit->add_option("--split-fraction", fit_split,
                  "reserve this fraction of each regime for omega estimation")
      ->each([&](const std::string&) { fit_split_set = true; });
  fit->add_option("--omega-out", fit_omega_out, "write the omega used as a single-row TSV");
  fit->add_option("--out", fit_out, "output adjacency TSV")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "cross-validate lambda");
  std::string cv_data, cv_method, cv_out;
  int cv_folds = 5;
  std::vector<double> cv_grid;
  uint64_t cv_seed = 0;
  cv->add_option("--data", cv_data, "dataset directory")->required();
  cv->add_option("--method", cv_method, "dotears|notears|notears-iv|golem-nv")->required();
  cv->add_option("--folds", cv_folds, "fold count (default 5)");
  cv->add_option("--lambda-grid", cv_grid, "lambda values")->delimiter(',');
  cv->add_option("--seed", cv_seed, "fold-shuffle seed (default: dataset meta seed)");
  cv->add_option("--out", cv_out, "output CSV")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate an estimate against the truth");
  std::string ev_est, ev_truth, ev_out;
  double ev_tau = 0.0;
  ev->add_option("--est", ev_est, "estimated adjacency TSV")->required();
  ev->add_option("--truth", ev_truth, "true adjacency TSV")->required();
  ev->add_option("--threshold", ev_tau, "evaluation threshold")->required();
  ev->add_option("--out", ev_out, "output CSV")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "run a sweep spec");
  std::string sw_spec, sw_out;
  int sw_jobs = 1;
  bool sw_fresh = false;
  sw->add_option("--spec", sw_spec, "sweep JSON")->required();
  sw->add_option("--out", sw_out, "output CSV")->required();
  sw->add_option("--jobs", sw_jobs, "worker threads (default 1)");
  sw->add_flag("--cv-fresh-draw", sw_fresh, "cross-validate on a fresh draw of each scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_config, sim_out,
                          sim_seed_set ? std::optional<uint64_t>(sim_seed) : std::nullopt);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_data, fit_method, fit_lambda, fit_omega,
                     fit_tau_set ? std::optional<double>(fit_tau) : std::nullopt,
                     fit_split_set ? std::optional<double>(fit_split) : std::nullopt,
                     fit_omega_out, fit_out);
    }
    if (cv->parsed()) return cmd_cv(cv_data, cv_method, cv_folds, cv_grid, cv_seed, cv_out);
    if (ev->parsed()) return cmd_eval(ev_est, ev_truth, ev_tau, ev_out);
    if (sw->parsed()) return cmd_sweep(sw_spec, sw_out, sw_jobs, sw_fresh);
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MissingRegimeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateDataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const StratificationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
