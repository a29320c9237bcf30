#pragma once

// Seeded synthetic networks and the noise model used to corrupt them.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. The conversions to uniform and normal variates are done
// here rather than with <random> distributions (whose algorithms are
// implementation-defined), so a seed gives the same network on every
// platform and standard library.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "netest/netcore.hpp"

namespace netest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  /// Uniform integer in [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finaliser; derives independent stream seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  return mix_seed(mix_seed(mix_seed(mix_seed(base) ^ a) ^ b) ^ c);
}

enum class GeneratorKind { RandomComplete, ScaleFree, Modular };

inline GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "random" || name == "random_complete" || name == "random-complete") return GeneratorKind::RandomComplete;
  if (name == "scale_free" || name == "scale-free") return GeneratorKind::ScaleFree;
  if (name == "modular") return GeneratorKind::Modular;
  throw Error(ErrorCode::InvalidParams, "unknown generator kind '" + std::string(name) + "'");
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::RandomComplete;
  Index n = 0;
  std::uint64_t seed = 0;
  double avg_degree = 5.0;     // ScaleFree
  int modules = 8;             // Modular
  double in_module_frac = 0.9; // Modular
};

struct GeneratedNetwork {
  WeightMatrix weights;
  std::optional<ModuleAssignment> modules;
};

inline WeightMatrix random_complete(Index n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidParams, "random_complete needs n >= 2");
  Rng rng(seed);
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = rng.uniform();
  return validate(std::move(w));
}

/// Preferential attachment: a complete core of m+1 nodes, then each new
/// node links to m distinct existing nodes chosen with probability
/// proportional to degree, m = round(avg_degree / 2). Edges get U[0,1)
/// weights afterwards, in row-major order.
inline WeightMatrix scale_free(Index n, double avg_degree, std::uint64_t seed) {
  if (!(avg_degree >= 1.0) || !(static_cast<double>(n) > avg_degree) || n < 3) {
    throw Error(ErrorCode::InvalidParams, "scale_free needs n > avg_degree >= 1 and n >= 3");
  }
  const Index m = std::max<Index>(1, std::lround(avg_degree / 2.0));
  if (m + 1 > n) throw Error(ErrorCode::InvalidParams, "scale_free core larger than the network");
  Rng rng(seed);
  BoolMatrix adj = BoolMatrix::Constant(n, n, false);
  std::vector<Index> endpoints;  // each node appears once per incident edge
  for (Index i = 0; i <= m; ++i)
    for (Index j = i + 1; j <= m; ++j) {
      adj(i, j) = adj(j, i) = true;
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<Index> chosen;
  for (Index v = m + 1; v < n; ++v) {
    chosen.clear();
    while (static_cast<Index>(chosen.size()) < m) {
      const Index u = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (Index u : chosen) {
      adj(u, v) = adj(v, u) = true;
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (adj(i, j)) w(i, j) = w(j, i) = rng.uniform();
  return validate(std::move(w));
}

/// Near-equal contiguous modules. Every within-module pair is an edge;
/// round(P_in (1 - f) / f) between-module edges are then drawn uniformly
/// without replacement, so a fraction f of the nonzero weights sits inside
/// modules. Weights are U[0,1).
inline GeneratedNetwork modular(Index n, int n_modules, double in_module_frac, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorCode::InvalidParams, "modular needs n >= 3");
  if (n_modules < 1 || n_modules > n) throw Error(ErrorCode::InvalidParams, "modules must be in 1..n");
  if (!(in_module_frac > 0.0 && in_module_frac <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "in_module_frac must be in (0,1]");
  }
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = static_cast<int>(i * n_modules / n) + 1;
  ModuleAssignment modules(std::move(ids));

  std::vector<std::pair<Index, Index>> inside, between;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) (modules.same_module(i, j) ? inside : between).emplace_back(i, j);

  const auto wanted = static_cast<std::size_t>(
      std::llround(static_cast<double>(inside.size()) * (1.0 - in_module_frac) / in_module_frac));
  const std::size_t n_between = std::min(wanted, between.size());

  Rng rng(seed);
  // Partial Fisher-Yates: the first n_between slots become the sample.
  for (std::size_t k = 0; k < n_between; ++k) {
    const std::size_t pick = k + rng.below(between.size() - k);
    std::swap(between[k], between[pick]);
  }
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [i, j] : inside) w(i, j) = w(j, i) = rng.uniform();
  for (std::size_t k = 0; k < n_between; ++k) {
    const auto [i, j] = between[k];
    w(i, j) = w(j, i) = rng.uniform();
  }
  return {validate(std::move(w)), std::move(modules)};
}

inline GeneratedNetwork generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::RandomComplete: return {random_complete(spec.n, spec.seed), std::nullopt};
    case GeneratorKind::ScaleFree: return {scale_free(spec.n, spec.avg_degree, spec.seed), std::nullopt};
    case GeneratorKind::Modular: return modular(spec.n, spec.modules, spec.in_module_frac, spec.seed);
  }
  throw Error(ErrorCode::InvalidParams, "unknown generator kind");
}

/// W + sigma E with one N(0,1) draw per unordered pair, negatives set to 0,
/// then divided by the largest entry. The division happens even when
/// sigma is 0.
inline WeightMatrix add_noise(const Matrix& w, double sigma, std::uint64_t seed) {
  require_square(w);
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidParams, "sigma must be nonnegative");
  const Index n = w.rows();
  Rng rng(seed);
  Matrix noisy = w;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double v = std::max(0.0, w(i, j) + sigma * rng.normal());
      noisy(i, j) = noisy(j, i) = v;
    }
  noisy.diagonal().setZero();
  const double peak = noisy.maxCoeff();
  if (!(peak > 0.0)) throw Error(ErrorCode::DegenerateAllZero, "noisy network is identically zero");
  noisy /= peak;
  return validate(std::move(noisy));
}

/// Symmetric mask with `frac` of the unordered pairs (rounded) marked missing.
inline MissingMask random_mask(Index n, double frac, std::uint64_t seed) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw Error(ErrorCode::InvalidParams, "missing fraction must be in [0,1]");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const auto count = static_cast<std::size_t>(std::llround(frac * static_cast<double>(pairs.size())));
  Rng rng(seed);
  BoolMatrix missing = BoolMatrix::Constant(n, n, false);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pick = k + rng.below(pairs.size() - k);
    std::swap(pairs[k], pairs[pick]);
    missing(pairs[k].first, pairs[k].second) = missing(pairs[k].second, pairs[k].first) = true;
  }
  return MissingMask(std::move(missing));
}

}  // namespace netest
