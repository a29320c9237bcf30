#pragma once

// Analytic derivatives of the metrics in metrics.hpp.
//
// grad_<metric>() returns the unconstrained partial derivative matrix
// (entry (a,b) = df/dw_ab with every entry treated as independent).
// Undirected networks move along the symmetric manifold, so descent uses
// symmetrize_gradient(P) = P + P^T - diag(P), whose off-diagonal entry (a,b)
// is the derivative of f when w_ab and w_ba move together. fd_gradient()
// measures exactly that quantity by central differences and is the
// reference every analytic path is tested against. The diagonal is not a
// free variable, so grad() and PartialAccumulator::gradient() report it as 0
// just like the oracle; symmetrize_gradient() itself keeps diag(P).
//
// Sums of many per-node terms (a full set of local targets) are accumulated
// as per-node coefficients and expanded with a handful of matrix products,
// so one gradient costs O(n^3) regardless of how many terms it has.

#include <functional>
#include <optional>
#include <vector>

#include "netest/metrics.hpp"

namespace netest {

using GradientMatrix = Matrix;

inline GradientMatrix symmetrize_gradient(const GradientMatrix& g) {
  require_square(g);
  GradientMatrix out = g + g.transpose();
  out.diagonal() = g.diagonal();
  return out;
}

/// Weighted sum of metric partial derivatives at a fixed W.
class PartialAccumulator {
 public:
  explicit PartialAccumulator(const Matrix& w, const Matrix* w_squared = nullptr)
      : w_(w),
        n_(w.rows()),
        row_sums_(w.rowwise().sum()),
        col_sums_(w.colwise().sum().transpose()),
        degree_coef_(Vector::Zero(n_)),
        nd_scale_(Vector::Zero(n_)),
        nd_shift_(Vector::Zero(n_)),
        cc_num_(Vector::Zero(n_)),
        cc_den_(Vector::Zero(n_)),
        extra_(Matrix::Zero(n_, n_)) {
    require_square(w);
    if (w_squared) w2_ = *w_squared;
  }

  /// Adds weight * df/dW for the metric in `spec` (the target is ignored).
  void add(const MetricSpec& spec, double weight) {
    check_spec(spec, n_);
    if (weight == 0.0) return;
    switch (spec.kind) {
      case MetricKind::Degree:
        degree_coef_(*spec.node) += weight;
        break;
      case MetricKind::MeanDegree:
        ones_coef_ += weight / static_cast<double>(n_);
        break;
      case MetricKind::AvgNeighbourDegree:
        add_neighbour_degree(*spec.node, weight);
        break;
      case MetricKind::Transitivity:
        transitivity_coef_ += weight;
        break;
      case MetricKind::ClusteringCoefficient:
        add_clustering(*spec.node, weight);
        break;
      case MetricKind::GlobalClustering:
        for (Index i = 0; i < n_; ++i) add_clustering(i, weight / static_cast<double>(n_));
        break;
      case MetricKind::Modularity:
        add_modularity(*spec.modules, weight);
        break;
    }
  }

  GradientMatrix partial() const {
    GradientMatrix p = extra_;
    p.array() += ones_coef_;
    // sum_i c_i R_i^T puts c_i along row i.
    p.colwise() += degree_coef_;

    if (has_nd_) {
      // sum_i a_i (W R_i + R_i W)^T - b_i R_i^T
      p.noalias() += nd_scale_ * row_sums_.transpose();
      p.colwise() += w_.transpose() * nd_scale_ - nd_shift_;
    }

    if (transitivity_coef_ != 0.0) {
      const double alpha = w2().cwiseProduct(w_.transpose()).sum();
      double beta = 0.0;
      for (Index a = 0; a < n_; ++a) beta += detail::closed_pair_weight(w_, a);
      if (beta != 0.0) {
        // d tr{W H W} / dW = (H W + W H)^T
        Matrix dbeta = -2.0 * w_.transpose();
        dbeta.colwise() += col_sums_;
        dbeta.rowwise() += row_sums_.transpose();
        p += transitivity_coef_ * (3.0 * beta * w2().transpose() - alpha * dbeta) / (beta * beta);
      }
    }

    if (has_cc_) {
      // sum_i u_i (W^2 S_ii + W S_ii W + S_ii W^2)^T with S_ii = e_i e_i^T
      const auto u = cc_num_.asDiagonal();
      Matrix num = w2() * u;
      num.noalias() += (w_ * u) * w_;
      num.noalias() += u * w2();
      p += num.transpose();
      // sum_i v_i (H W S_ii + S_ii W H)^T
      const auto v = cc_den_.asDiagonal();
      Matrix hw = -w_;
      hw.rowwise() += col_sums_.transpose();
      Matrix wh = -w_;
      wh.colwise() += row_sums_;
      const Matrix den = hw * v + v * wh;
      p -= den.transpose();
    }
    return p;
  }

  GradientMatrix gradient() const {
    GradientMatrix g = symmetrize_gradient(partial());
    g.diagonal().setZero();
    return g;
  }

 private:
  const Matrix& w2() const {
    if (!w2_) w2_ = w_ * w_;
    return *w2_;
  }

  void add_neighbour_degree(Index i, double weight) {
    const double tau = row_sums_(i);
    if (tau == 0.0) return;
    const double rho = w_.row(i).dot(row_sums_);
    has_nd_ = true;
    nd_scale_(i) += weight / tau;
    nd_shift_(i) += weight * rho / (tau * tau);
  }

  void add_clustering(Index i, double weight) {
    const double zeta = detail::closed_pair_weight(w_, i);
    if (zeta == 0.0) return;
    const double gamma = w2().row(i).dot(w_.col(i).transpose());
    has_cc_ = true;
    cc_num_(i) += weight / zeta;
    cc_den_(i) += weight * gamma / (zeta * zeta);
  }

  void add_modularity(const ModuleAssignment& modules, double weight) {
    const double total = w_.sum();
    if (total == 0.0) throw Error(ErrorCode::EmptyNetwork, "modularity gradient of a network with no weight");
    const Matrix delta = modules.delta();
    const double theta = w_.cwiseProduct(delta).sum();
    // The m2 term sums xi_r = tr{W^T C_r W Delta^T} over all n circular
    // shifts; the shifts add up to the all-ones matrix, so
    // sum_r C_r W Delta^T = O W Delta and sum_r xi_r = c^T Delta c with c the
    // column sums.
    const Vector delta_c = delta * col_sums_;
    const double xi_sum = col_sums_.dot(delta_c);
    Matrix dm1 = total * delta;
    dm1.array() -= theta;
    dm1 /= total * total;
    Matrix dm2 = Matrix::Zero(n_, n_);
    dm2.rowwise() += 2.0 * total * delta_c.transpose();
    dm2.array() -= 2.0 * xi_sum;
    dm2 /= total * total * total;
    extra_ += weight * (dm1 - dm2);
  }

  Matrix w_;
  Index n_;
  Vector row_sums_;
  Vector col_sums_;
  mutable std::optional<Matrix> w2_;

  double ones_coef_ = 0.0;
  double transitivity_coef_ = 0.0;
  bool has_nd_ = false;
  bool has_cc_ = false;
  Vector degree_coef_;
  Vector nd_scale_;
  Vector nd_shift_;
  Vector cc_num_;
  Vector cc_den_;
  Matrix extra_;
};

namespace detail {

inline GradientMatrix single_partial(const Matrix& w, const MetricSpec& spec) {
  PartialAccumulator acc(w);
  acc.add(spec, 1.0);
  return acc.partial();
}

}  // namespace detail

// Unconstrained partial derivatives, before symmetrization.

inline GradientMatrix grad_degree(const Matrix& w, Index i) {
  return detail::single_partial(w, {MetricKind::Degree, i, std::nullopt, 0.0});
}

inline GradientMatrix grad_mean_degree(const Matrix& w) {
  return detail::single_partial(w, {MetricKind::MeanDegree, std::nullopt, std::nullopt, 0.0});
}

inline GradientMatrix grad_avg_neighbour_degree(const Matrix& w, Index i) {
  return detail::single_partial(w, {MetricKind::AvgNeighbourDegree, i, std::nullopt, 0.0});
}

inline GradientMatrix grad_transitivity(const Matrix& w) {
  return detail::single_partial(w, {MetricKind::Transitivity, std::nullopt, std::nullopt, 0.0});
}

/// Quotient rule on tr{S_ii W^3} / tr{S_ii W H W}. The numerator derivative
/// is the three-term sum over r = 0..2 of (W^r S_ii W^(2-r))^T, with no extra
/// leading factor.
inline GradientMatrix grad_clustering_coefficient(const Matrix& w, Index i) {
  return detail::single_partial(w, {MetricKind::ClusteringCoefficient, i, std::nullopt, 0.0});
}

inline GradientMatrix grad_global_clustering(const Matrix& w) {
  return detail::single_partial(w, {MetricKind::GlobalClustering, std::nullopt, std::nullopt, 0.0});
}

inline GradientMatrix grad_modularity(const Matrix& w, const ModuleAssignment& modules) {
  return detail::single_partial(w, {MetricKind::Modularity, std::nullopt, modules, 0.0});
}

/// Symmetrized derivative of the metric in `spec` (target ignored), zero diagonal.
inline GradientMatrix grad(const MetricSpec& spec, const Matrix& w) {
  PartialAccumulator acc(w);
  acc.add(spec, 1.0);
  return acc.gradient();
}

/// Central differences of `f` under joint perturbation of (i,j) and (j,i).
/// Entries within h of the [0,1] boundary fall back to one-sided
/// differences; the diagonal is fixed at zero and reported as 0.
inline GradientMatrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& w,
                                  double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "finite-difference step must be positive");
  require_square(w);
  const Index n = w.rows();
  GradientMatrix g = GradientMatrix::Zero(n, n);
  Matrix probe = w;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double base = w(i, j);
      const double up = base + h <= 1.0 ? base + h : base;
      const double down = base - h >= 0.0 ? base - h : base;
      probe(i, j) = probe(j, i) = up;
      const double f_up = f(probe);
      probe(i, j) = probe(j, i) = down;
      const double f_down = f(probe);
      probe(i, j) = probe(j, i) = base;
      g(i, j) = g(j, i) = (f_up - f_down) / (up - down);
    }
  }
  return g;
}

inline GradientMatrix fd_gradient(const MetricSpec& spec, const Matrix& w, double h) {
  check_spec(spec, w.rows());
  return fd_gradient([&spec](const Matrix& m) { return evaluate(spec, m); }, w, h);
}

}  // namespace netest
