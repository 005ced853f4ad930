#include "ivdag/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "json.hpp"

#include "ivdag/errors.hpp"
#include "ivdag/graph.hpp"
#include "ivdag/io_detail.hpp"

namespace ivdag {

const DataMatrix* InterventionalDataset::find(int k) const {
  for (const auto& r : regimes) {
    if (r.k == k) return &r.data;
  }
  return nullptr;
}

long InterventionalDataset::total_rows() const {
  long n = 0;
  for (const auto& r : regimes) n += r.data.n();
  return n;
}

void InterventionalDataset::validate() const {
  if (regimes.empty()) throw InvalidInputError("dataset has no regimes");
  std::vector<int> seen;
  for (const auto& r : regimes) {
    if (r.k < 0 || r.k > p) {
      throw InvalidInputError("regime index " + std::to_string(r.k) + " outside 0.." +
                              std::to_string(p));
    }
    if (std::find(seen.begin(), seen.end(), r.k) != seen.end()) {
      throw InvalidInputError("duplicate regime index " + std::to_string(r.k));
    }
    seen.push_back(r.k);
    if (r.data.p() != p) throw InvalidInputError("regime column count != p");
    if (!r.data.all_finite()) throw InvalidInputError("regime data has non-finite entries");
  }
}

namespace io {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return cells;
}

}  // namespace

InterventionalDataset read_dataset(const std::string& tsv_path) {
  std::ifstream in(tsv_path);
  if (!in) throw ParseError("cannot open dataset file: " + tsv_path);
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("no regimes (empty file): " + tsv_path);
  ++lineno;
  auto header = split_tabs(line);
  if (header.size() < 2 || header[0] != "intervention") {
    throw ParseError("bad header in " + tsv_path + " (expected 'intervention\\tv1\\t...')", lineno);
  }
  const int p = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < p; ++j) {
    if (header[j + 1] != "v" + std::to_string(j + 1)) {
      throw ParseError("bad header column '" + header[j + 1] + "' in " + tsv_path, lineno);
    }
  }

  // Two passes over rows kept in memory: counts first, then packed columns.
  std::map<int, long> counts;
  std::vector<std::pair<int, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_tabs(line);
    if (static_cast<int>(cells.size()) != p + 1) {
      throw ParseError("ragged row (" + std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(p + 1) + ") in " + tsv_path,
                       lineno);
    }
    long k = io_detail::parse_long(cells[0], tsv_path, lineno);
    if (k < 0 || k > p) {
      throw ParseError("regime index " + std::to_string(k) + " outside 0.." + std::to_string(p) +
                           " in " + tsv_path,
                       lineno);
    }
    std::vector<double> vals(p);
    for (int j = 0; j < p; ++j) vals[j] = io_detail::parse_double(cells[j + 1], tsv_path, lineno);
    counts[static_cast<int>(k)]++;
    rows.emplace_back(static_cast<int>(k), std::move(vals));
  }
  if (rows.empty()) throw ParseError("no regimes (no data rows): " + tsv_path);

  InterventionalDataset ds;
  ds.p = p;
  std::map<int, long> cursor;
  for (const auto& [k, n] : counts) {
    ds.regimes.push_back({k, DataMatrix(n, p)});
    cursor[k] = 0;
  }
  auto regime_of = [&](int k) -> DataMatrix& {
    for (auto& r : ds.regimes) {
      if (r.k == k) return r.data;
    }
    throw Error("internal: regime lookup");
  };
  for (const auto& [k, vals] : rows) {
    DataMatrix& m = regime_of(k);
    long i = cursor[k]++;
    for (int j = 0; j < p; ++j) m.at(i, j) = vals[j];
  }
  ds.validate();
  return ds;
}

void write_dataset(const InterventionalDataset& ds, const std::string& tsv_path) {
  ds.validate();
  std::ofstream out(tsv_path);
  if (!out) throw Error("cannot write dataset file: " + tsv_path);
  out << "intervention";
  for (int j = 0; j < ds.p; ++j) out << "\tv" << (j + 1);
  out << '\n';
  for (const auto& r : ds.regimes) {
    for (long i = 0; i < r.data.n(); ++i) {
      out << r.k;
      for (int j = 0; j < ds.p; ++j) out << '\t' << io_detail::format_double(r.data.at(i, j));
      out << '\n';
    }
  }
}

void write_meta(const DatasetMeta& meta, const std::string& json_path) {
  nlohmann::json j;
  j["p"] = meta.p;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [k, n] : meta.regime_counts) counts[std::to_string(k)] = n;
  j["regime_counts"] = counts;
  j["seed"] = meta.seed;
  if (!meta.scenario_json.empty()) j["scenario"] = nlohmann::json::parse(meta.scenario_json);
  if (!meta.truth_path.empty()) j["truth"] = meta.truth_path;
  if (!meta.sigmas.empty()) j["sigmas"] = meta.sigmas;
  std::ofstream out(json_path);
  if (!out) throw Error("cannot write meta file: " + json_path);
  out << j.dump(2) << '\n';
}

DatasetMeta read_meta(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ParseError("cannot open meta file: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad JSON in " + json_path + ": " + e.what());
  }
  DatasetMeta meta;
  meta.p = j.at("p").get<int>();
  if (j.contains("regime_counts")) {
    for (auto& [k, v] : j["regime_counts"].items()) {
      meta.regime_counts.emplace_back(std::stoi(k), v.get<long>());
    }
    std::sort(meta.regime_counts.begin(), meta.regime_counts.end());
  }
  if (j.contains("seed")) meta.seed = j["seed"].get<uint64_t>();
  if (j.contains("scenario")) meta.scenario_json = j["scenario"].dump();
  if (j.contains("truth")) meta.truth_path = j["truth"].get<std::string>();
  if (j.contains("sigmas")) meta.sigmas = j["sigmas"].get<std::vector<double>>();
  return meta;
}

DatasetDir load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  DatasetDir d;
  fs::path base(dir);
  fs::path data = base / "data.tsv";
  if (!fs::exists(data)) throw ParseError("no data.tsv in " + dir);
  d.interventional = read_dataset(data.string());
  if (fs::exists(base / "meta.json")) {
    d.meta = read_meta((base / "meta.json").string());
    d.has_meta = true;
    if (d.meta.p != d.interventional.p) {
      throw ParseError("meta.json p=" + std::to_string(d.meta.p) + " does not match data.tsv p=" +
                       std::to_string(d.interventional.p));
    }
  }
  if (fs::exists(base / "observational.tsv")) {
    auto obs = read_dataset((base / "observational.tsv").string());
    if (obs.regimes.size() != 1 || obs.regimes[0].k != 0) {
      throw ParseError("observational.tsv must contain only regime 0: " + dir);
    }
    d.observational = std::move(obs.regimes[0].data);
  }
  if (fs::exists(base / "w_true.tsv")) {
    d.w_true = graph::read_adjacency_tsv((base / "w_true.tsv").string());
  }
  return d;
}

}  // namespace io

}  // namespace ivdag
