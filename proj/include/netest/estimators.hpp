#pragma once

// Projected gradient descent on squared metric mismatch.
//
// Every estimator minimises c(W) = sum_m (f_m(W) - K_m)^2 (plus a quadratic
// tether for the constrained fit) with the update
//     W <- project(W - mu * sum_m e_m df_m/dW)
// where df_m/dW is the symmetrized derivative. The factor 2 from
// differentiating e_m^2 is folded into mu, so the step direction is half of
// the symmetric-pair gradient of c. The tether lambda * ||W - Y||_F^2
// contributes 2 * lambda * (W - Y), which is half of its symmetric-pair
// gradient as well, keeping both parts on the same scale.

#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "netest/gradients.hpp"

namespace netest {

struct DescentConfig {
  double mu = 1e-3;
  double eps = 1e-8;
  long max_iters = 50000;
  long log_every = 100;  // 0 logs only the first and last iteration

  void check() const {
    if (!(mu > 0.0)) throw Error(ErrorCode::InvalidParams, "mu must be positive");
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be positive");
    if (max_iters < 1) throw Error(ErrorCode::InvalidParams, "max_iters must be at least 1");
    if (log_every < 0) throw Error(ErrorCode::InvalidParams, "log_every must be nonnegative");
  }
};

struct DecompositionConfig {
  DescentConfig inner;
  double lambda0 = 0.1;
  double lambda_growth = 1.05;
  long outer_max = 100;
  double recon_eps = 1e-6;

  void check() const {
    inner.check();
    if (!(lambda0 >= 0.0)) throw Error(ErrorCode::InvalidParams, "lambda0 must be nonnegative");
    if (!(lambda_growth >= 1.0)) throw Error(ErrorCode::InvalidParams, "lambda_growth must be >= 1");
    if (outer_max < 1) throw Error(ErrorCode::InvalidParams, "outer_max must be at least 1");
    if (!(recon_eps > 0.0)) throw Error(ErrorCode::InvalidParams, "recon_eps must be positive");
  }
};

struct TraceRecord {
  long iter = 0;
  double cost = 0.0;
  std::vector<double> per_metric_error;  // signed residuals f_m(W) - K_m
  std::optional<double> recon_error;
  std::optional<double> dist_to_reference;
};

struct FitResult {
  WeightMatrix w_hat;
  std::vector<TraceRecord> trace;
  bool converged = false;
  long iters = 0;
  double final_cost = 0.0;
};

struct DecompositionResult {
  FitResult first;
  FitResult second;
  std::vector<double> recon_errors;  // one per outer iteration, starting with the initial pair
  bool converged = false;
  long outer_iters = 0;
};

/// Optional extras for a descent run.
struct DescentOptions {
  std::optional<Matrix> reference;        // trace records the Frobenius distance to it
  std::optional<MissingMask> update_mask; // only flagged entries move; off when empty
};

// Stop when the objective improves by less than this for that many
// consecutive iterations.
inline constexpr double kPlateauTolerance = 1e-14;
inline constexpr long kPlateauWindow = 100;
inline constexpr int kStallLimit = 5;

inline std::vector<double> residuals(const MetricCache& cache, const std::vector<MetricSpec>& targets) {
  std::vector<double> e;
  e.reserve(targets.size());
  for (const auto& spec : targets) e.push_back(cache.evaluate(spec) - spec.target);
  return e;
}

inline std::vector<double> residuals(const Matrix& w, const std::vector<MetricSpec>& targets) {
  return residuals(MetricCache(w), targets);
}

inline double sum_of_squares(const std::vector<double>& e) {
  double s = 0.0;
  for (double v : e) s += v * v;
  return s;
}

inline double cost(const Matrix& w, const std::vector<MetricSpec>& targets) {
  return sum_of_squares(residuals(w, targets));
}

namespace detail {

inline GradientMatrix cost_gradient(const MetricCache& cache, const std::vector<MetricSpec>& targets,
                                    const std::vector<double>& e) {
  PartialAccumulator acc(cache.weights(), cache.square_if_computed());
  for (std::size_t m = 0; m < targets.size(); ++m) acc.add(targets[m], e[m]);
  return acc.gradient();
}

struct Penalty {
  Matrix anchor;
  double lambda = 0.0;
};

inline void require_targets(const std::vector<MetricSpec>& targets, Index n) {
  if (targets.empty()) throw Error(ErrorCode::InvalidSpec, "no target metrics given");
  for (const auto& spec : targets) check_spec(spec, n);
}

inline FitResult descend(WeightMatrix start, const std::vector<MetricSpec>& targets, const DescentConfig& cfg,
                         const std::optional<Penalty>& penalty, const DescentOptions& opts) {
  cfg.check();
  const Index n = start.size();
  require_targets(targets, n);
  if (opts.reference) require_same_shape(*opts.reference, start);
  const bool masked = opts.update_mask && !opts.update_mask->empty();
  if (opts.update_mask && opts.update_mask->size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "update mask size");
  }

  WeightMatrix w = std::move(start);
  auto cache = std::make_unique<MetricCache>(w.matrix());
  std::vector<double> e = residuals(*cache, targets);
  double c = sum_of_squares(e);
  auto objective = [&](const Matrix& m, double metric_cost) {
    return penalty ? metric_cost + penalty->lambda * (m - penalty->anchor).squaredNorm() : metric_cost;
  };
  double obj = objective(w, c);
  if (!std::isfinite(obj)) throw Error(ErrorCode::NonFiniteCost, "initial cost is not finite");

  FitResult result{w, {}, false, 0, c};
  auto record = [&](long iter) {
    TraceRecord r{iter, c, e, std::nullopt, std::nullopt};
    if (opts.reference) r.dist_to_reference = frobenius_distance(w, *opts.reference);
    result.trace.push_back(std::move(r));
  };
  record(0);

  long t = 0;
  long flat = 0;
  while (c > cfg.eps && t < cfg.max_iters) {
    GradientMatrix step = detail::cost_gradient(*cache, targets, e);
    if (penalty) step += 2.0 * penalty->lambda * (w.matrix() - penalty->anchor);
    if (masked) {
      step = opts.update_mask->matrix().select(step, Matrix::Zero(n, n));
    }
    w = project(w.matrix() - cfg.mu * step);
    ++t;
    cache = std::make_unique<MetricCache>(w.matrix());
    e = residuals(*cache, targets);
    c = sum_of_squares(e);
    const double next_obj = objective(w, c);
    if (!std::isfinite(next_obj)) {
      throw Error(ErrorCode::NonFiniteCost,
                  "cost became non-finite at iteration " + std::to_string(t) + "; reduce mu");
    }
    flat = (obj - next_obj < kPlateauTolerance) ? flat + 1 : 0;
    obj = next_obj;
    if (cfg.log_every > 0 && t % cfg.log_every == 0) record(t);
    if (flat >= kPlateauWindow) break;
  }
  if (result.trace.back().iter != t) record(t);

  result.w_hat = std::move(w);
  result.converged = c <= cfg.eps;
  result.iters = t;
  result.final_cost = c;
  return result;
}

}  // namespace detail

/// Symmetrized sum_m e_m df_m/dW, the descent direction before scaling by mu.
inline GradientMatrix cost_gradient(const Matrix& w, const std::vector<MetricSpec>& targets) {
  const MetricCache cache(w);
  return detail::cost_gradient(cache, targets, residuals(cache, targets));
}

/// Denoises W_e towards the target metric values.
inline FitResult denoise(const WeightMatrix& w_e, const std::vector<MetricSpec>& targets,
                         const DescentConfig& cfg = {}, const DescentOptions& opts = {}) {
  return detail::descend(w_e, targets, cfg, std::nullopt, opts);
}

/// Metric fit tethered to `anchor` by lambda * ||W - anchor||_F^2. The anchor
/// may leave [0,1] (it is a difference of networks in the decomposition);
/// the iterate starts at its projection.
inline FitResult constrained_fit(const Matrix& anchor, const std::vector<MetricSpec>& targets, double lambda,
                                 const DescentConfig& cfg = {}, const DescentOptions& opts = {}) {
  require_square(anchor);
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidParams, "lambda must be nonnegative");
  return detail::descend(project(anchor), targets, cfg, detail::Penalty{anchor, lambda}, opts);
}

inline double constrained_objective(const Matrix& w, const Matrix& anchor,
                                    const std::vector<MetricSpec>& targets, double lambda) {
  return cost(w, targets) + lambda * (w - anchor).squaredNorm();
}

/// Mixtures are sums of two networks, so entries may exceed 1.
inline void check_mixture(const Matrix& w_f) {
  require_square(w_f);
  for (Index i = 0; i < w_f.rows(); ++i) {
    if (w_f(i, i) != 0.0) throw Error(ErrorCode::NonzeroDiagonal, "mixture", EntryIndex{i, i});
    for (Index j = 0; j < w_f.cols(); ++j) {
      if (!(w_f(i, j) >= 0.0) || !std::isfinite(w_f(i, j))) {
        throw Error(ErrorCode::OutOfRange, "mixture entries must be finite and nonnegative", EntryIndex{i, j});
      }
      if (std::abs(w_f(i, j) - w_f(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorCode::Asymmetric, "mixture", EntryIndex{i, j});
      }
    }
  }
}

struct DecompositionReferences {
  std::optional<Matrix> first;
  std::optional<Matrix> second;
};

/// Splits W_f into two networks matching their own targets by alternating
/// tethered fits. Starts from the two denoised estimates unless `initial`
/// is given. The tether weight grows as lambda0 * lambda_growth^t.
inline DecompositionResult decompose(const Matrix& w_f, const std::vector<MetricSpec>& targets1,
                                     const std::vector<MetricSpec>& targets2, const DecompositionConfig& cfg = {},
                                     const std::optional<std::pair<WeightMatrix, WeightMatrix>>& initial = std::nullopt,
                                     const DecompositionReferences& refs = {}) {
  cfg.check();
  check_mixture(w_f);
  const Index n = w_f.rows();
  detail::require_targets(targets1, n);
  detail::require_targets(targets2, n);

  DescentConfig quiet = cfg.inner;
  quiet.log_every = 0;

  std::optional<WeightMatrix> w1;
  std::optional<WeightMatrix> w2;
  if (initial) {
    require_same_shape(initial->first, w_f);
    require_same_shape(initial->second, w_f);
    w1 = initial->first;
    w2 = initial->second;
  } else {
    const WeightMatrix start = project(w_f);
    w1 = denoise(start, targets1, quiet).w_hat;
    w2 = denoise(start, targets2, quiet).w_hat;
  }

  DecompositionResult out{FitResult{*w1, {}, false, 0, 0.0}, FitResult{*w2, {}, false, 0, 0.0}, {}, false, 0};
  auto reconstruction = [&] { return (w_f - (w1->matrix() + w2->matrix())).squaredNorm(); };
  auto record = [&](long t, double recon) {
    auto push = [&](FitResult& fit, const WeightMatrix& w, const std::vector<MetricSpec>& targets,
                    const std::optional<Matrix>& ref) {
      TraceRecord r;
      r.iter = t;
      r.per_metric_error = residuals(w, targets);
      r.cost = sum_of_squares(r.per_metric_error);
      r.recon_error = recon;
      if (ref) r.dist_to_reference = frobenius_distance(w, *ref);
      fit.trace.push_back(std::move(r));
    };
    push(out.first, *w1, targets1, refs.first);
    push(out.second, *w2, targets2, refs.second);
    out.recon_errors.push_back(recon);
  };

  double recon = reconstruction();
  if (!std::isfinite(recon)) throw Error(ErrorCode::NonFiniteCost, "reconstruction error is not finite");
  record(0, recon);

  long t = 0;
  int rising = 0;
  double lambda = cfg.lambda0;
  while (recon > cfg.recon_eps && t < cfg.outer_max) {
    w1 = constrained_fit(w_f - w2->matrix(), targets1, lambda, quiet).w_hat;
    w2 = constrained_fit(w_f - w1->matrix(), targets2, lambda, quiet).w_hat;
    ++t;
    const double next = reconstruction();
    if (!std::isfinite(next)) throw Error(ErrorCode::NonFiniteCost, "reconstruction error is not finite");
    rising = next > recon ? rising + 1 : 0;
    recon = next;
    record(t, recon);
    if (rising >= kStallLimit) {
      throw Error(ErrorCode::ScheduleStall, "reconstruction error rose for " + std::to_string(kStallLimit) +
                                                " consecutive outer iterations; adjust the lambda schedule");
    }
    lambda *= cfg.lambda_growth;
  }

  out.converged = recon <= cfg.recon_eps;
  out.outer_iters = t;
  auto finish = [&](FitResult& fit, const WeightMatrix& w) {
    fit.w_hat = w;
    fit.converged = out.converged;
    fit.iters = t;
    fit.final_cost = fit.trace.back().cost;
  };
  finish(out.first, *w1);
  finish(out.second, *w2);
  return out;
}

/// Fills the entries flagged in `mask` starting from w_init; observed
/// entries are never touched.
inline FitResult complete(const WeightMatrix& w_ic, const MissingMask& mask, const std::vector<MetricSpec>& targets,
                          double w_init = 0.5, const DescentConfig& cfg = {}, DescentOptions opts = {}) {
  if (mask.size() != w_ic.size()) throw Error(ErrorCode::ShapeMismatch, "mask size differs from network size");
  if (mask.empty()) throw Error(ErrorCode::EmptyMask, "no missing entries to complete");
  if (!(w_init >= 0.0 && w_init <= 1.0)) throw Error(ErrorCode::InvalidParams, "w_init must lie in [0,1]");
  Matrix start = w_ic.matrix();
  start = mask.matrix().select(Matrix::Constant(start.rows(), start.cols(), w_init), start);
  opts.update_mask = mask;
  return detail::descend(validate(std::move(start)), targets, cfg, std::nullopt, opts);
}

}  // namespace netest
