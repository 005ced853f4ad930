#include "ivdag/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ivdag/errors.hpp"
#include "ivdag/simd/kernels.hpp"
#include "ivdag/variance.hpp"

namespace ivdag::baselines {

namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

std::vector<double> lasso_cd(const DataMatrix& x, const std::vector<int>& cols,
                             const std::vector<double>& y, double lambda,
                             std::vector<double> warm_start) {
  const long n = x.n();
  const size_t m = cols.size();
  std::vector<double> beta = warm_start.size() == m ? std::move(warm_start)
                                                    : std::vector<double>(m, 0.0);
  std::vector<double> colsq(m);
  for (size_t i = 0; i < m; ++i) {
    colsq[i] = simd::sum_sq(x.col(cols[i]), static_cast<size_t>(n)) / static_cast<double>(n);
    if (colsq[i] <= 0.0) throw DegenerateDataError("constant covariate column in lasso");
  }
  std::vector<double> r = y;
  for (size_t i = 0; i < m; ++i) {
    if (beta[i] != 0.0) simd::axpy(-beta[i], x.col(cols[i]), r.data(), static_cast<size_t>(n));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  constexpr int kMaxSweeps = 10000;
  constexpr double kTol = 1e-9;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_delta = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double* xi = x.col(cols[i]);
      const double rho =
          inv_n * simd::dot(xi, r.data(), static_cast<size_t>(n)) + colsq[i] * beta[i];
      const double b_new = soft_threshold(rho, lambda) / colsq[i];
      const double delta = b_new - beta[i];
      if (delta != 0.0) {
        simd::axpy(-delta, xi, r.data(), static_cast<size_t>(n));
        beta[i] = b_new;
        max_delta = std::max(max_delta, std::fabs(delta) * std::sqrt(colsq[i]));
      }
    }
    if (max_delta < kTol) break;
  }
  return beta;
}

Matrix sortnregress(const DataMatrix& x, const SortnregressConfig& config) {
  const int p = x.p();
  const long n = x.n();
  if (n < 2) throw InvalidInputError("sortnregress: need at least 2 samples");
  if (config.rule == SortnregressConfig::Penalty::FixedLambda && config.lambda < 0.0) {
    throw InvalidInputError("sortnregress: lambda must be >= 0");
  }
  Matrix w(p, p);
  if (p == 1) return w;

  std::vector<double> var(p);
  for (int j = 0; j < p; ++j) {
    var[j] = variance::sample_variance(x.col(j), n);
    if (var[j] <= 0.0) {
      throw DegenerateDataError("sortnregress: column " + std::to_string(j + 1) + " is constant");
    }
  }
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return var[a] < var[b]; });

  // Centered working copy (per-node regressions include an intercept).
  DataMatrix xc(n, p);
  for (int j = 0; j < p; ++j) {
    const double mean = simd::sum(x.col(j), static_cast<size_t>(n)) / static_cast<double>(n);
    const double* src = x.col(j);
    double* dst = xc.col(j);
    for (long i = 0; i < n; ++i) dst[i] = src[i] - mean;
  }

  for (int k = 1; k < p; ++k) {
    const int target = order[k];
    std::vector<int> covariates(order.begin(), order.begin() + k);
    std::vector<double> y(xc.col(target), xc.col(target) + n);

    if (config.rule == SortnregressConfig::Penalty::FixedLambda) {
      auto beta = lasso_cd(xc, covariates, y, config.lambda);
      for (int i = 0; i < k; ++i) w(covariates[i], target) = beta[i];
      continue;
    }

    // BIC over a geometric lambda path, warm-started from the sparse end.
    double lambda_max = 0.0;
    for (int c : covariates) {
      lambda_max = std::max(
          lambda_max, std::fabs(simd::dot(xc.col(c), y.data(), static_cast<size_t>(n))) /
                          static_cast<double>(n));
    }
    if (lambda_max <= 0.0) continue;  // response uncorrelated with everything
    constexpr int kPathLen = 60;
    constexpr double kPathEps = 1e-3;
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max * kPathEps);
    double best_bic = std::numeric_limits<double>::infinity();
    std::vector<double> best_beta(covariates.size(), 0.0);
    std::vector<double> beta(covariates.size(), 0.0);
    for (int t = 0; t < kPathLen; ++t) {
      const double lam =
          std::exp(log_max + (log_min - log_max) * static_cast<double>(t) / (kPathLen - 1));
      beta = lasso_cd(xc, covariates, y, lam, beta);
      std::vector<double> r = y;
      int df = 0;
      for (size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] != 0.0) {
          simd::axpy(-beta[i], xc.col(covariates[i]), r.data(), static_cast<size_t>(n));
          ++df;
        }
      }
      const double rss = std::max(simd::sum_sq(r.data(), static_cast<size_t>(n)), 1e-300);
      const double bic = static_cast<double>(n) * std::log(rss / static_cast<double>(n)) +
                         df * std::log(static_cast<double>(n));
      if (bic < best_bic) {
        best_bic = bic;
        best_beta = beta;
      }
    }
    for (int i = 0; i < k; ++i) w(covariates[i], target) = best_beta[i];
  }
  return w;
}

bool varsortability_cutoff(double w, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInputError("varsortability_cutoff: gamma must be > 0");
  }
  if (gamma <= 1.0) return true;
  return std::fabs(w) >= std::sqrt(1.0 - 1.0 / gamma);
}

}  // namespace ivdag::baselines
