#pragma once

// Error measures and Monte Carlo sweeps over synthetic networks.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "netest/estimators.hpp"
#include "netest/generators.hpp"

namespace netest {

/// 1 - ||W_hat - W|| / ||W_ref - W||; 1 is perfect recovery, 0 no change,
/// negative means the estimate is further from the truth than the reference.
inline double error_reduction(const Matrix& w_hat, const Matrix& w_true, const Matrix& w_ref) {
  require_same_shape(w_hat, w_true);
  require_same_shape(w_ref, w_true);
  const double ref_err = frobenius_distance(w_ref, w_true);
  if (ref_err == 0.0) throw Error(ErrorCode::ZeroReferenceError, "reference equals the true network");
  return 1.0 - frobenius_distance(w_hat, w_true) / ref_err;
}

/// Further reduction of a decomposition estimate over the denoise-only one.
inline double decomposition_reduction(const Matrix& w_dec, const Matrix& w_den, const Matrix& w_true) {
  return error_reduction(w_dec, w_true, w_den);
}

/// Mean squared difference over the off-diagonal entries.
inline double mse(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  require_square(a);
  const Index n = a.rows();
  if (n < 2) throw Error(ErrorCode::ShapeMismatch, "mse needs at least two nodes");
  Matrix d = a - b;
  d.diagonal().setZero();
  return d.squaredNorm() / static_cast<double>(n * (n - 1));
}

enum class Scheme { Denoise, Decompose, Complete };
enum class SweepVar { Sigma, N, MissingFrac };

/// Named target set. For decomposition `metrics` applies to the first
/// network and `second` to the second. `mu` overrides the step size.
struct MetricSet {
  std::string name;
  std::vector<MetricKind> metrics;
  std::vector<MetricKind> second;
  std::optional<double> mu;
};

struct SweepSpec {
  Scheme scheme = Scheme::Denoise;
  GeneratorSpec generator;
  std::optional<GeneratorSpec> second_generator;  // Decompose only
  std::vector<MetricSet> metric_sets;
  SweepVar sweep_var = SweepVar::Sigma;
  std::vector<double> sweep_values;
  int realizations = 10;
  std::uint64_t base_seed = 1;

  double sigma = 0.5;         // noise level when not swept
  double missing_frac = 0.1;  // missing fraction when not swept
  double w_init = 0.5;
  DescentConfig descent;
  DecompositionConfig decomposition;
  unsigned threads = 1;

  void check() const {
    if (realizations < 1) throw Error(ErrorCode::InvalidParams, "realizations must be at least 1");
    if (sweep_values.empty()) throw Error(ErrorCode::InvalidParams, "sweep_values is empty");
    if (!std::is_sorted(sweep_values.begin(), sweep_values.end())) {
      throw Error(ErrorCode::InvalidParams, "sweep_values must be sorted");
    }
    if (metric_sets.empty()) throw Error(ErrorCode::InvalidParams, "no metric sets");
    for (const auto& set : metric_sets) {
      if (set.metrics.empty()) throw Error(ErrorCode::InvalidParams, "metric set '" + set.name + "' is empty");
      if (scheme == Scheme::Decompose && set.second.empty()) {
        throw Error(ErrorCode::InvalidParams, "metric set '" + set.name + "' needs second-network metrics");
      }
    }
    if (scheme == Scheme::Decompose && !second_generator) {
      throw Error(ErrorCode::InvalidParams, "decomposition sweeps need a second generator");
    }
    if (sweep_var == SweepVar::MissingFrac && scheme != Scheme::Complete) {
      throw Error(ErrorCode::InvalidParams, "missing_frac can only be swept for completion");
    }
    if (sweep_var == SweepVar::Sigma && scheme == Scheme::Decompose) {
      throw Error(ErrorCode::InvalidParams, "decomposition sweeps have no noise level");
    }
    decomposition.check();
    descent.check();
  }
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string metric_set;
  double mean_er = 0.0;
  double std_er = 0.0;  // sample standard deviation, 0 for one realization
  int realizations = 0;
};

namespace detail {

enum SeedStream : std::uint64_t { kTruth = 1, kNoise = 2, kMask = 3, kSecondTruth = 4 };

inline double realization_er(const SweepSpec& spec, const MetricSet& set, double value, std::uint64_t value_idx,
                             std::uint64_t r) {
  GeneratorSpec gen = spec.generator;
  double sigma = spec.sigma;
  double missing = spec.missing_frac;
  switch (spec.sweep_var) {
    case SweepVar::Sigma: sigma = value; break;
    case SweepVar::N: gen.n = static_cast<Index>(std::llround(value)); break;
    case SweepVar::MissingFrac: missing = value; break;
  }
  gen.seed = derive_seed(spec.base_seed, value_idx, r, kTruth);
  const GeneratedNetwork truth = generate(gen);

  DescentConfig cfg = spec.descent;
  cfg.log_every = 0;
  if (set.mu) cfg.mu = *set.mu;
  const auto targets = targets_from(truth.weights, set.metrics, truth.modules);

  switch (spec.scheme) {
    case Scheme::Denoise: {
      const WeightMatrix noisy = add_noise(truth.weights, sigma, derive_seed(spec.base_seed, value_idx, r, kNoise));
      const FitResult fit = denoise(noisy, targets, cfg);
      return error_reduction(fit.w_hat, truth.weights, noisy);
    }
    case Scheme::Complete: {
      const MissingMask mask = random_mask(gen.n, missing, derive_seed(spec.base_seed, value_idx, r, kMask));
      const FitResult fit = complete(truth.weights, mask, targets, spec.w_init, cfg);
      const Matrix init = mask.matrix().select(Matrix::Constant(gen.n, gen.n, spec.w_init), truth.weights.matrix());
      return error_reduction(fit.w_hat, truth.weights, init);
    }
    case Scheme::Decompose: {
      GeneratorSpec gen2 = *spec.second_generator;
      gen2.n = gen.n;
      gen2.seed = derive_seed(spec.base_seed, value_idx, r, kSecondTruth);
      const GeneratedNetwork truth2 = generate(gen2);
      const auto targets2 = targets_from(truth2.weights, set.second, truth2.modules);
      const Matrix mixture = truth.weights.matrix() + truth2.weights.matrix();
      const WeightMatrix start = project(mixture);
      const FitResult den1 = denoise(start, targets, cfg);
      const FitResult den2 = denoise(start, targets2, cfg);
      DecompositionConfig dcfg = spec.decomposition;
      dcfg.inner = cfg;
      const DecompositionResult dec =
          decompose(mixture, targets, targets2, dcfg, std::make_pair(den1.w_hat, den2.w_hat));
      return 0.5 * (decomposition_reduction(dec.first.w_hat, den1.w_hat, truth.weights) +
                    decomposition_reduction(dec.second.w_hat, den2.w_hat, truth2.weights));
    }
  }
  return 0.0;
}

}  // namespace detail

/// Runs every (sweep value, realization) pair; each realization draws one
/// truth (and one corruption) shared by all metric sets. Output does not
/// depend on the thread count.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.check();
  const std::size_t n_values = spec.sweep_values.size();
  const std::size_t n_sets = spec.metric_sets.size();
  const auto n_real = static_cast<std::size_t>(spec.realizations);
  const std::size_t n_tasks = n_values * n_real;

  // er[(value * n_real + r) * n_sets + set]
  std::vector<double> er(n_tasks * n_sets, 0.0);
  std::vector<std::exception_ptr> failures(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const std::size_t v = task / n_real;
      const std::size_t r = task % n_real;
      try {
        for (std::size_t s = 0; s < n_sets; ++s) {
          er[task * n_sets + s] = detail::realization_er(spec, spec.metric_sets[s], spec.sweep_values[v], v, r);
        }
      } catch (...) {
        failures[task] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(n_tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::vector<SweepRow> rows;
  for (std::size_t v = 0; v < n_values; ++v) {
    for (std::size_t s = 0; s < n_sets; ++s) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n_real; ++r) sum += er[(v * n_real + r) * n_sets + s];
      const double mean = sum / static_cast<double>(n_real);
      double sq = 0.0;
      for (std::size_t r = 0; r < n_real; ++r) {
        const double d = er[(v * n_real + r) * n_sets + s] - mean;
        sq += d * d;
      }
      const double sd = n_real > 1 ? std::sqrt(sq / static_cast<double>(n_real - 1)) : 0.0;
      rows.push_back({spec.sweep_values[v], spec.metric_sets[s].name, mean, sd, spec.realizations});
    }
  }
  return rows;
}

inline std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "sweep_value,metric_set,mean_er,std_er,realizations\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,", row.sweep_value);
    out += buf;
    out += row.metric_set;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%d\n", row.mean_er, row.std_er, row.realizations);
    out += buf;
  }
  return out;
}

inline std::string format_trace_csv(const std::vector<TraceRecord>& trace) {
  std::string out = "iter,cost,recon_error,dist_to_truth\n";
  char buf[64];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,", r.iter, r.cost);
    out += buf;
    if (r.recon_error) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.recon_error);
      out += buf;
    }
    out += ',';
    if (r.dist_to_reference) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.dist_to_reference);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline std::string format_summary(const FitResult& fit) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "converged: %s\niterations: %ld\nfinal_cost: %.17g\n",
                fit.converged ? "true" : "false", fit.iters, fit.final_cost);
  return buf;
}

}  // namespace netest
