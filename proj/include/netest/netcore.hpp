#pragma once

// Core network representation: validated weight matrices, missing-entry
// masks, module assignments, the projection used after every descent step
// and the constant helper matrices the derivative formulas are written in.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "netest/error.hpp"

namespace netest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kSymmetryTolerance = 1e-12;

/// Symmetric, zero-diagonal matrix with entries in [0,1]. Only obtainable
/// through validate() or project(), so holding one means the invariants hold.
class WeightMatrix {
 public:
  Index size() const { return w_.rows(); }
  const Matrix& matrix() const { return w_; }
  operator const Matrix&() const { return w_; }  // NOLINT: read-only view
  double operator()(Index i, Index j) const { return w_(i, j); }

  friend bool operator==(const WeightMatrix& a, const WeightMatrix& b) {
    return a.w_.rows() == b.w_.rows() && a.w_ == b.w_;
  }

 private:
  explicit WeightMatrix(Matrix w) : w_(std::move(w)) {}
  friend WeightMatrix validate(Matrix w);
  friend WeightMatrix project(const Matrix& w);

  Matrix w_;
};

inline void require_square(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + " matrix");
  }
}

inline void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

inline WeightMatrix validate(Matrix w) {
  require_square(w);
  const Index n = w.rows();
  if (n == 0) throw Error(ErrorCode::InvalidParams, "empty matrix");
  for (Index i = 0; i < n; ++i) {
    if (w(i, i) != 0.0) {
      throw Error(ErrorCode::NonzeroDiagonal, "", EntryIndex{i, i});
    }
    for (Index j = 0; j < n; ++j) {
      const double v = w(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "value " + std::to_string(v), EntryIndex{i, j});
      }
      if (j > i && std::abs(v - w(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorCode::Asymmetric, "", EntryIndex{i, j});
      }
    }
  }
  // Within tolerance counts as symmetric; store the exact mirror.
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) w(j, i) = w(i, j);
  return WeightMatrix(std::move(w));
}

/// Clamp to [0,1], average with the transpose, zero the diagonal.
inline WeightMatrix project(const Matrix& w) {
  require_square(w);
  Matrix clamped = w.cwiseMax(0.0).cwiseMin(1.0);
  Matrix out = 0.5 * (clamped + clamped.transpose());
  out.diagonal().setZero();
  return WeightMatrix(std::move(out));
}

/// Symmetric boolean matrix flagging entries whose weight is unknown.
class MissingMask {
 public:
  explicit MissingMask(BoolMatrix missing) : missing_(std::move(missing)) {
    if (missing_.rows() != missing_.cols()) {
      throw Error(ErrorCode::NotSquare, "mask");
    }
    for (Index i = 0; i < missing_.rows(); ++i) {
      if (missing_(i, i)) throw Error(ErrorCode::NonzeroDiagonal, "mask", EntryIndex{i, i});
      for (Index j = i + 1; j < missing_.cols(); ++j) {
        if (missing_(i, j) != missing_(j, i)) {
          throw Error(ErrorCode::Asymmetric, "mask", EntryIndex{i, j});
        }
      }
    }
  }

  static MissingMask none(Index n) { return MissingMask(BoolMatrix::Constant(n, n, false)); }

  Index size() const { return missing_.rows(); }
  bool operator()(Index i, Index j) const { return missing_(i, j); }
  const BoolMatrix& matrix() const { return missing_; }

  /// Number of missing unordered pairs.
  Index pair_count() const { return missing_.count() / 2; }
  bool empty() const { return pair_count() == 0; }

  /// 0/1 selector matrix with ones at the missing entries.
  Matrix selector() const { return missing_.cast<double>(); }

 private:
  BoolMatrix missing_;
};

/// Node to module id map, ids are 1..M.
class ModuleAssignment {
 public:
  explicit ModuleAssignment(std::vector<int> module_of) : module_of_(std::move(module_of)) {
    if (module_of_.empty()) throw Error(ErrorCode::InvalidParams, "empty module assignment");
    for (std::size_t i = 0; i < module_of_.size(); ++i) {
      if (module_of_[i] < 1) {
        throw Error(ErrorCode::InvalidParams,
                    "module id of node " + std::to_string(i + 1) + " must be >= 1");
      }
    }
  }

  static ModuleAssignment single(Index n) {
    return ModuleAssignment(std::vector<int>(static_cast<std::size_t>(n), 1));
  }

  Index size() const { return static_cast<Index>(module_of_.size()); }
  int module_of(Index i) const { return module_of_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& modules() const { return module_of_; }
  int module_count() const { return *std::max_element(module_of_.begin(), module_of_.end()); }

  bool same_module(Index i, Index j) const { return module_of(i) == module_of(j); }

  /// Co-membership matrix: entry (i,j) is 1 iff i and j share a module.
  Matrix delta() const {
    const Index n = size();
    Matrix d(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) d(i, j) = same_module(i, j) ? 1.0 : 0.0;
    return d;
  }

  friend bool operator==(const ModuleAssignment&, const ModuleAssignment&) = default;

 private:
  std::vector<int> module_of_;
};

inline void require_index(Index n, Index i, const char* what = "node") {
  if (i < 0 || i >= n) {
    throw Error(ErrorCode::IndexOutOfRange, std::string(what) + " " + std::to_string(i + 1) +
                                                " not in 1.." + std::to_string(n));
  }
}

// Constant matrices used by the trace-form metric definitions.

/// Zeros except a one at (i,j).
inline Matrix unit_entry(Index n, Index i, Index j) {
  require_index(n, i, "row");
  require_index(n, j, "column");
  Matrix s = Matrix::Zero(n, n);
  s(i, j) = 1.0;
  return s;
}

inline Matrix all_ones(Index n) { return Matrix::Ones(n, n); }

/// All ones except the diagonal.
inline Matrix hollow_ones(Index n) {
  Matrix h = Matrix::Ones(n, n);
  h.diagonal().setZero();
  return h;
}

/// Ones in column j, zeros elsewhere.
inline Matrix column_ones(Index n, Index j) {
  require_index(n, j, "column");
  Matrix r = Matrix::Zero(n, n);
  r.col(j).setOnes();
  return r;
}

/// Permutation that moves the rows of the matrix it multiplies down by
/// `shift` places, wrapping around. shift 0 is the identity.
inline Matrix circular_shift(Index n, Index shift) {
  require_index(n, shift, "shift");
  Matrix c = Matrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) c(a, (a - shift + n) % n) = 1.0;
  return c;
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  return (a - b).norm();
}

}  // namespace netest
