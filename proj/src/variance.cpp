#include "ivdag/variance.hpp"

#include <cmath>
#include <fstream>

#include "ivdag/errors.hpp"
#include "ivdag/io_detail.hpp"
#include "ivdag/simd/kernels.hpp"

namespace ivdag::variance {

void OmegaEstimate::validate() const {
  if (values.empty()) throw InvalidInputError("omega: empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInputError("omega: entries must be positive and finite");
    }
  }
}

double sample_variance(const double* x, long n) {
  if (n < 2) throw DegenerateDataError("sample variance needs at least 2 samples");
  const double mean = simd::sum(x, static_cast<size_t>(n)) / static_cast<double>(n);
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(n - 1);
}

OmegaEstimate estimate_omega(const InterventionalDataset& data, bool identity_fallback) {
  data.validate();
  const int p = data.p;
  OmegaEstimate omega;
  omega.values.assign(p, 1.0);
  for (int j = 0; j < p; ++j) {
    const DataMatrix* regime = data.find(j + 1);
    if (regime == nullptr || regime->n() < 2) {
      if (identity_fallback) {
        omega.values.assign(p, 1.0);
        omega.source = OmegaSource::Identity;
        return omega;
      }
      throw MissingRegimeError(j + 1);
    }
    const double v = sample_variance(regime->col(j), regime->n());
    if (v <= 0.0) {
      throw DegenerateDataError("constant column " + std::to_string(j + 1) + " in regime " +
                                std::to_string(j + 1));
    }
    omega.values[j] = v;
  }
  omega.source = OmegaSource::Estimated;
  return omega;
}

OmegaEstimate identity_omega(int p) {
  OmegaEstimate omega;
  omega.values.assign(p, 1.0);
  omega.source = OmegaSource::Identity;
  return omega;
}

OmegaEstimate explicit_omega(std::vector<double> values) {
  OmegaEstimate omega;
  omega.values = std::move(values);
  omega.source = OmegaSource::Explicit;
  omega.validate();
  return omega;
}

void write_omega_tsv(const OmegaEstimate& omega, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write omega file: " + path);
  for (int j = 0; j < omega.p(); ++j) {
    if (j) out << '\t';
    out << io_detail::format_double(omega.values[j]);
  }
  out << '\n';
}

OmegaEstimate read_omega_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open omega file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw ParseError("empty omega file: " + path);
  std::vector<double> values;
  size_t pos = 0;
  long lineno = 1;
  while (pos <= line.size()) {
    size_t tab = line.find('\t', pos);
    std::string cell = line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos);
    values.push_back(io_detail::parse_double(cell, path, lineno));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return explicit_omega(std::move(values));
}

}  // namespace ivdag::variance
