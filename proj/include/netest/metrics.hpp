#pragma once

// Weighted graph metrics evaluated through their trace forms.
//
// All functions accept any square matrix so that finite-difference probes
// (which may leave the valid set) can be evaluated; a WeightMatrix converts
// implicitly. Degenerate denominators give 0, except modularity on an empty
// network, which throws EmptyNetwork.
//
// Transitivity uses tr{W^3} / tr{W H_n W}. The denominator sums w_ih * w_jh
// over all h and all ordered pairs i != j of h's neighbours, so for a unit
// complete graph numerator and denominator are both n(n-1)(n-2).

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netest/netcore.hpp"

namespace netest {

enum class MetricKind {
  Degree,
  MeanDegree,
  AvgNeighbourDegree,
  Transitivity,
  ClusteringCoefficient,
  GlobalClustering,
  Modularity,
};

inline constexpr std::array<MetricKind, 7> kAllMetricKinds = {
    MetricKind::Degree,        MetricKind::MeanDegree,
    MetricKind::AvgNeighbourDegree, MetricKind::Transitivity,
    MetricKind::ClusteringCoefficient, MetricKind::GlobalClustering,
    MetricKind::Modularity,
};

constexpr bool is_local(MetricKind kind) {
  return kind == MetricKind::Degree || kind == MetricKind::AvgNeighbourDegree ||
         kind == MetricKind::ClusteringCoefficient;
}

constexpr std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Degree: return "degree";
    case MetricKind::MeanDegree: return "mean_degree";
    case MetricKind::AvgNeighbourDegree: return "avg_neighbour_degree";
    case MetricKind::Transitivity: return "transitivity";
    case MetricKind::ClusteringCoefficient: return "clustering_coefficient";
    case MetricKind::GlobalClustering: return "global_clustering";
    case MetricKind::Modularity: return "modularity";
  }
  return "";
}

/// Accepts the canonical names plus a few short aliases.
inline MetricKind parse_metric_kind(std::string_view name) {
  for (MetricKind k : kAllMetricKinds)
    if (metric_name(k) == name) return k;
  if (name == "clustering") return MetricKind::ClusteringCoefficient;
  if (name == "neighbour_degree" || name == "avg_neighbor_degree") return MetricKind::AvgNeighbourDegree;
  throw Error(ErrorCode::InvalidSpec, "unknown metric '" + std::string(name) + "'");
}

/// One objective term: a metric, its attachments and the target value.
struct MetricSpec {
  MetricKind kind = MetricKind::MeanDegree;
  std::optional<Index> node;                 // zero-based
  std::optional<ModuleAssignment> modules;
  double target = 0.0;
};

inline void check_spec(const MetricSpec& spec, Index n) {
  if (!std::isfinite(spec.target)) {
    throw Error(ErrorCode::InvalidSpec, std::string(metric_name(spec.kind)) + ": non-finite target");
  }
  if (is_local(spec.kind)) {
    if (!spec.node) throw Error(ErrorCode::InvalidSpec, std::string(metric_name(spec.kind)) + " needs a node");
    require_index(n, *spec.node);
  }
  if (spec.kind == MetricKind::Modularity) {
    if (!spec.modules) throw Error(ErrorCode::InvalidSpec, "modularity needs a module assignment");
    if (spec.modules->size() != n) {
      throw Error(ErrorCode::ShapeMismatch, "module assignment covers " +
                                                std::to_string(spec.modules->size()) + " nodes, matrix has " +
                                                std::to_string(n));
    }
  }
}

// Node strength, tr{W R_i}.
inline double degree(const Matrix& w, Index i) {
  require_square(w);
  require_index(w.rows(), i);
  return w.row(i).sum();
}

inline double mean_degree(const Matrix& w) {
  require_square(w);
  return w.sum() / static_cast<double>(w.rows());
}

// tr{W^2 R_i} / tr{W R_i}.
inline double avg_neighbour_degree(const Matrix& w, Index i) {
  require_square(w);
  require_index(w.rows(), i);
  const double tau = w.row(i).sum();
  if (tau == 0.0) return 0.0;
  const Vector strengths = w.rowwise().sum();
  const double rho = w.row(i).dot(strengths);
  return rho / tau;
}

namespace detail {

// tr{S_ii W H W} = (sum_b w_ib)(sum_c w_ci) - sum_b w_ib w_bi
inline double closed_pair_weight(const Matrix& w, Index i) {
  return w.row(i).sum() * w.col(i).sum() - w.row(i).dot(w.col(i).transpose());
}

}  // namespace detail

inline double transitivity(const Matrix& w) {
  require_square(w);
  const Matrix w2 = w * w;
  const double alpha = w2.cwiseProduct(w.transpose()).sum();  // tr{W^3}
  double beta = 0.0;
  for (Index a = 0; a < w.rows(); ++a) beta += detail::closed_pair_weight(w, a);
  return beta == 0.0 ? 0.0 : alpha / beta;
}

// {W^3}_ii / {W H W}_ii.
inline double clustering_coefficient(const Matrix& w, Index i) {
  require_square(w);
  require_index(w.rows(), i);
  const double zeta = detail::closed_pair_weight(w, i);
  if (zeta == 0.0) return 0.0;
  const double gamma = w.row(i).dot(w * w.col(i));
  return gamma / zeta;
}

inline double global_clustering(const Matrix& w) {
  require_square(w);
  const Index n = w.rows();
  const Matrix w2 = w * w;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double zeta = detail::closed_pair_weight(w, i);
    if (zeta == 0.0) continue;
    total += w2.row(i).dot(w.col(i).transpose()) / zeta;
  }
  return total / static_cast<double>(n);
}

// (1/l) sum_ij (w_ij - k_i k_j / l) delta_ij with l the total weight.
inline double modularity(const Matrix& w, const ModuleAssignment& modules) {
  require_square(w);
  const Index n = w.rows();
  if (modules.size() != n) throw Error(ErrorCode::ShapeMismatch, "module assignment size");
  const double total = w.sum();
  if (total == 0.0) throw Error(ErrorCode::EmptyNetwork, "modularity of a network with no weight");
  const Vector k = w.rowwise().sum();
  std::vector<double> module_strength(static_cast<std::size_t>(modules.module_count()) + 1, 0.0);
  double inside = 0.0;
  for (Index i = 0; i < n; ++i) {
    module_strength[static_cast<std::size_t>(modules.module_of(i))] += k(i);
    for (Index j = 0; j < n; ++j)
      if (modules.same_module(i, j)) inside += w(i, j);
  }
  double expected = 0.0;
  for (double s : module_strength) expected += s * s;
  return inside / total - expected / (total * total);
}

/// Evaluates many specs at one W, sharing strengths and W^2 between them.
class MetricCache {
 public:
  explicit MetricCache(const Matrix& w) : w_(w), strengths_(w.rowwise().sum()) { require_square(w); }

  const Matrix& weights() const { return w_; }
  const Vector& strengths() const { return strengths_; }

  const Matrix& square() const {
    if (!square_) square_ = w_ * w_;
    return *square_;
  }
  const Matrix* square_if_computed() const { return square_ ? &*square_ : nullptr; }

  double evaluate(const MetricSpec& spec) const {
    check_spec(spec, w_.rows());
    switch (spec.kind) {
      case MetricKind::Degree: return strengths_(*spec.node);
      case MetricKind::MeanDegree: return strengths_.sum() / static_cast<double>(w_.rows());
      case MetricKind::AvgNeighbourDegree: {
        const double tau = strengths_(*spec.node);
        return tau == 0.0 ? 0.0 : w_.row(*spec.node).dot(strengths_) / tau;
      }
      case MetricKind::Transitivity: return transitivity_value();
      case MetricKind::ClusteringCoefficient: return clustering(*spec.node);
      case MetricKind::GlobalClustering: {
        if (!global_clustering_) {
          double total = 0.0;
          for (Index i = 0; i < w_.rows(); ++i) total += clustering(i);
          global_clustering_ = total / static_cast<double>(w_.rows());
        }
        return *global_clustering_;
      }
      case MetricKind::Modularity: return modularity(w_, *spec.modules);
    }
    return 0.0;
  }

 private:
  double transitivity_value() const {
    if (!transitivity_) {
      const double alpha = square().cwiseProduct(w_.transpose()).sum();
      double beta = 0.0;
      for (Index a = 0; a < w_.rows(); ++a) beta += detail::closed_pair_weight(w_, a);
      transitivity_ = beta == 0.0 ? 0.0 : alpha / beta;
    }
    return *transitivity_;
  }

  double clustering(Index i) const {
    const double zeta = detail::closed_pair_weight(w_, i);
    if (zeta == 0.0) return 0.0;
    return square().row(i).dot(w_.col(i).transpose()) / zeta;
  }

  const Matrix& w_;
  Vector strengths_;
  mutable std::optional<Matrix> square_;
  mutable std::optional<double> transitivity_;
  mutable std::optional<double> global_clustering_;
};

inline double evaluate(const MetricSpec& spec, const Matrix& w) { return MetricCache(w).evaluate(spec); }

/// Builds target specs from a reference network. Local kinds expand into one
/// term per node; modularity uses `modules`.
inline std::vector<MetricSpec> targets_from(const Matrix& reference, const std::vector<MetricKind>& kinds,
                                            const std::optional<ModuleAssignment>& modules = std::nullopt) {
  require_square(reference);
  const Index n = reference.rows();
  std::vector<MetricSpec> specs;
  for (MetricKind kind : kinds) {
    if (is_local(kind)) {
      for (Index i = 0; i < n; ++i) {
        MetricSpec s{kind, i, std::nullopt, 0.0};
        s.target = evaluate(s, reference);
        specs.push_back(std::move(s));
      }
    } else {
      MetricSpec s{kind, std::nullopt, kind == MetricKind::Modularity ? modules : std::nullopt, 0.0};
      s.target = evaluate(s, reference);
      specs.push_back(std::move(s));
    }
  }
  return specs;
}

}  // namespace netest
