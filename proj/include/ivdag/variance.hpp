#pragma once

#include <string>
#include <vector>

#include "ivdag/dataset.hpp"

namespace ivdag::variance {

enum class OmegaSource { Estimated, Identity, Explicit };

// Diagonal of the exogenous error covariance. values[j] estimates the
// variance of node j+1's own noise term.
struct OmegaEstimate {
  std::vector<double> values;
  OmegaSource source = OmegaSource::Identity;

  int p() const { return static_cast<int>(values.size()); }
  void validate() const;  // positive, finite
};

// Marginal estimator: entry j is the unbiased sample variance (n-1
// denominator, mean subtracted) of column j within the regime intervening on
// node j+1. Needs regime k with >= 2 rows for every k in 1..p; a missing
// regime throws MissingRegimeError unless identity_fallback is set, in which
// case the whole estimate degrades to all-ones with source Identity (callers
// are expected to warn). A constant target column throws DegenerateDataError.
OmegaEstimate estimate_omega(const InterventionalDataset& data, bool identity_fallback = false);

OmegaEstimate identity_omega(int p);
OmegaEstimate explicit_omega(std::vector<double> values);

// Single-row TSV of p floats.
void write_omega_tsv(const OmegaEstimate& omega, const std::string& path);
OmegaEstimate read_omega_tsv(const std::string& path);

// Two-pass sample variance with the n-1 denominator.
double sample_variance(const double* x, long n);

}  // namespace ivdag::variance
