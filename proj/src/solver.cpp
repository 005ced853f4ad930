#include "ivdag/solver.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <vector>

#include "ivdag/errors.hpp"
#include "ivdag/numerics.hpp"
#include "ivdag/simd/kernels.hpp"

namespace ivdag::solver {

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::RhoExhausted: return "rho_exhausted";
    case FitStatus::IterBudget: return "iter_budget";
  }
  return "?";
}

void FitConfig::validate() const {
  if (lambda1 < 0.0) throw InvalidInputError("fit: lambda1 must be >= 0");
  if (!(h_tol > 0.0)) throw InvalidInputError("fit: h_tol must be > 0");
  if (!(rho_growth > 1.0)) throw InvalidInputError("fit: rho_growth must be > 1");
  if (!(progress_ratio > 0.0) || !(progress_ratio < 1.0)) {
    throw InvalidInputError("fit: progress_ratio must be in (0,1)");
  }
  if (max_outer < 1 || inner_max_iter < 1) throw InvalidInputError("fit: iteration budgets");
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr int kLbfgsMemory = 10;

// Augmented-Lagrangian subproblem over x = (W+, W-), both >= 0, diagonal
// pinned at zero.
class Subproblem {
 public:
  Subproblem(objective::SmoothLoss& loss, double lambda, int p)
      : loss_(loss), lambda_(lambda), p_(p), w_(p, p), gw_(p, p), hgrad_(p, p) {}

  void set_penalty(double rho, double multiplier) {
    rho_ = rho;
    multiplier_ = multiplier;
  }

  size_t dim() const { return 2 * static_cast<size_t>(p_) * p_; }

  void to_w(const std::vector<double>& x, Matrix& w) const {
    const size_t pp = static_cast<size_t>(p_) * p_;
    for (size_t i = 0; i < pp; ++i) w.data()[i] = x[i] - x[pp + i];
  }

  // Value and gradient of the subproblem at x. Returns NaN/Inf untouched so
  // the line search can reject the point.
  double eval(const std::vector<double>& x, std::vector<double>& grad) {
    const size_t pp = static_cast<size_t>(p_) * p_;
    to_w(x, w_);
    double value = loss_.value_grad(w_, &gw_);
    const double h = numerics::acyclicity(w_, &hgrad_);
    value += 0.5 * rho_ * h * h + multiplier_ * h;
    const double hcoef = rho_ * h + multiplier_;
    for (size_t i = 0; i < pp; ++i) gw_.data()[i] += hcoef * hgrad_.data()[i];
    for (int i = 0; i < p_; ++i) gw_(i, i) = 0.0;
    if (lambda_ != 0.0) {
      value += lambda_ * (simd::sum(x.data(), pp) + simd::sum(x.data() + pp, pp));
    }
    for (size_t i = 0; i < pp; ++i) {
      grad[i] = gw_.data()[i] + lambda_;
      grad[pp + i] = -gw_.data()[i] + lambda_;
    }
    for (int i = 0; i < p_; ++i) {
      const size_t d = static_cast<size_t>(i) * p_ + i;
      grad[d] = 0.0;
      grad[pp + d] = 0.0;
    }
    return value;
  }

  double h_of(const std::vector<double>& x) {
    to_w(x, w_);
    return numerics::acyclicity(w_);
  }

  void project(std::vector<double>& x) const {
    const size_t pp = static_cast<size_t>(p_) * p_;
    for (auto& v : x) {
      if (v < 0.0) v = 0.0;
    }
    for (int i = 0; i < p_; ++i) {
      const size_t d = static_cast<size_t>(i) * p_ + i;
      x[d] = 0.0;
      x[pp + d] = 0.0;
    }
  }

 private:
  objective::SmoothLoss& loss_;
  double lambda_;
  int p_;
  double rho_ = 0.0;
  double multiplier_ = 0.0;
  Matrix w_, gw_, hgrad_;
};

struct Pair {
  std::vector<double> s, y;
  double rho;  // 1 / (y.s)
};

double proj_grad_inf_norm(const std::vector<double>& x, const std::vector<double>& g) {
  double best = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double pg = (x[i] > 0.0) ? g[i] : std::min(g[i], 0.0);
    best = std::max(best, std::fabs(pg));
  }
  return best;
}

// Projected L-BFGS with Armijo backtracking along the projected path. Ends on
// the projected-gradient tolerance or the iteration budget. Accepted steps
// never increase the objective.
long inner_solve(Subproblem& prob, std::vector<double>& x, double grad_tol, int max_iter,
                 Matrix& last_finite) {
  const size_t dim = x.size();
  std::vector<double> g(dim), g_new(dim), q(dim), xt(dim);
  std::deque<Pair> mem;

  double f = prob.eval(x, g);
  if (!std::isfinite(f)) {
    throw DivergedError("objective non-finite at the inner starting point", last_finite);
  }
  prob.to_w(x, last_finite);

  long iters = 0;
  for (; iters < max_iter; ++iters) {
    if (proj_grad_inf_norm(x, g) <= grad_tol) break;

    // Two-loop recursion for d = -H g.
    q = g;
    std::vector<double> alpha(mem.size());
    for (size_t i = mem.size(); i-- > 0;) {
      alpha[i] = mem[i].rho * simd::dot(mem[i].s.data(), q.data(), dim);
      simd::axpy(-alpha[i], mem[i].y.data(), q.data(), dim);
    }
    if (!mem.empty()) {
      const Pair& last = mem.back();
      const double yy = simd::dot(last.y.data(), last.y.data(), dim);
      if (yy > 0.0) simd::scale(1.0 / (last.rho * yy), q.data(), dim);
    }
    for (size_t i = 0; i < mem.size(); ++i) {
      const double beta = mem[i].rho * simd::dot(mem[i].y.data(), q.data(), dim);
      simd::axpy(alpha[i] - beta, mem[i].s.data(), q.data(), dim);
    }

    bool accepted = false;
    double f_new = f;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      // First attempt: quasi-Newton direction; second: steepest descent.
      if (attempt == 1) {
        mem.clear();
        q = g;
      }
      double step = 1.0;
      for (int bt = 0; bt < kMaxBacktracks; ++bt) {
        for (size_t i = 0; i < dim; ++i) xt[i] = x[i] - step * q[i];
        prob.project(xt);
        // Armijo decrease against the actually-taken (projected) step.
        double gdx = 0.0;
        for (size_t i = 0; i < dim; ++i) gdx += g[i] * (xt[i] - x[i]);
        if (gdx >= 0.0) break;  // projection killed the descent direction
        f_new = prob.eval(xt, g_new);
        if (std::isfinite(f_new) && f_new <= f + kArmijo * gdx) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) break;  // no descent available at this scale

    // Curvature update.
    std::vector<double>& s = q;  // reuse buffer
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      const double si = xt[i] - x[i];
      const double yi = g_new[i] - g[i];
      sy += si * yi;
      ss += si * si;
      yy += yi * yi;
      s[i] = si;
    }
    if (sy > 1e-10 * std::sqrt(ss * yy)) {
      Pair pr;
      pr.s = s;
      pr.y.resize(dim);
      for (size_t i = 0; i < dim; ++i) pr.y[i] = g_new[i] - g[i];
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (mem.size() > kLbfgsMemory) mem.pop_front();
    }
    x = xt;
    g = g_new;
    f = f_new;
    prob.to_w(x, last_finite);
  }
  return iters;
}

}  // namespace

FitResult fit(objective::SmoothLoss& loss, const FitConfig& config) {
  config.validate();
  const int p = loss.p();
  Subproblem prob(loss, config.lambda1, p);

  std::vector<double> x(prob.dim(), 0.0);
  if (config.w_init.has_value()) {
    const Matrix& w0 = *config.w_init;
    if (w0.rows() != p || !w0.square()) throw InvalidInputError("fit: w_init shape mismatch");
    const size_t pp = static_cast<size_t>(p) * p;
    for (size_t i = 0; i < pp; ++i) {
      const double v = w0.data()[i];
      x[i] = v > 0.0 ? v : 0.0;
      x[pp + i] = v < 0.0 ? -v : 0.0;
    }
    prob.project(x);
  }

  FitResult res;
  res.w_hat = Matrix(p, p);
  Matrix last_finite(p, p);
  prob.to_w(x, last_finite);

  double rho = config.rho_init;
  double multiplier = 0.0;
  double h_prev = std::numeric_limits<double>::infinity();
  double h_new = prob.h_of(x);

  for (int outer = 0; outer < config.max_outer; ++outer) {
    res.outer_iters = outer + 1;
    prob.set_penalty(rho, multiplier);
    res.inner_iters_total +=
        inner_solve(prob, x, config.inner_grad_tol, config.inner_max_iter, last_finite);
    h_new = prob.h_of(x);
    multiplier += rho * h_new;
    if (h_new > config.progress_ratio * h_prev) rho *= config.rho_growth;
    h_prev = h_new;
    if (h_new <= config.h_tol) {
      res.status = FitStatus::Converged;
      break;
    }
    if (rho > config.rho_max) {
      res.status = FitStatus::RhoExhausted;
      break;
    }
    res.status = FitStatus::IterBudget;
  }

  prob.to_w(x, res.w_hat);
  for (int i = 0; i < p; ++i) res.w_hat(i, i) = 0.0;
  res.h_final = h_new;
  res.objective_final =
      loss.value_grad(res.w_hat, nullptr) + config.lambda1 * objective::l1_norm(res.w_hat);
  return res;
}

const DataMatrix& observational_matrix(const InterventionalDataset& data) {
  if (data.regimes.empty()) throw InvalidInputError("dataset has no regimes");
  if (data.regimes.size() == 1) return data.regimes.front().data;
  const DataMatrix* obs = data.find(0);
  if (!obs) {
    throw InvalidInputError(
        "observational method needs regime 0 (or a single-regime dataset)");
  }
  return *obs;
}

FitResult fit(const InterventionalDataset& data, const objective::ObjectiveSpec& spec,
              FitConfig config) {
  data.validate();
  spec.validate(data.p);
  config.lambda1 = spec.lambda1;
  using objective::Method;
  if (spec.method == Method::Dotears || spec.method == Method::NotearsInterventional) {
    auto loss = objective::make_loss(spec.method, &data, nullptr, &spec.omega);
    return fit(*loss, config);
  }
  const DataMatrix& x = observational_matrix(data);
  auto loss = objective::make_loss(spec.method, nullptr, &x, nullptr);
  return fit(*loss, config);
}

FitResult fit(const DataMatrix& x, const objective::ObjectiveSpec& spec, FitConfig config) {
  spec.validate(x.p());
  config.lambda1 = spec.lambda1;
  using objective::Method;
  if (spec.method == Method::Dotears || spec.method == Method::NotearsInterventional) {
    // A single matrix is an observational-only dataset.
    InterventionalDataset ds;
    ds.p = x.p();
    ds.regimes.push_back({0, x});
    auto loss = objective::make_loss(spec.method, &ds, nullptr, &spec.omega);
    return fit(*loss, config);
  }
  auto loss = objective::make_loss(spec.method, nullptr, &x, nullptr);
  return fit(*loss, config);
}

}  // namespace ivdag::solver
