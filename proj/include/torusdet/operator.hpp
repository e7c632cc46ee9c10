#pragma once

// Operators in l1(Z^n x Z^n) seen through their finite sections. The ladder
// only needs a dense section per window, the off-window masses, and the
// diagonal for traces, so matrices generated on demand (Hill matrices, symbols)
// share the code path with stored sparse matrices.

#include <optional>

#include <Eigen/Dense>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/numerics.hpp"

namespace torusdet {

class L1Operator {
 public:
  virtual ~L1Operator() = default;

  virtual int dimension() const = 0;
  virtual Eigen::MatrixXcd section(const TruncationWindow& w) const = 0;
  virtual TailSplit tail_split(const TruncationWindow& w) const = 0;
  /// Upper bound on the full l1 norm; may be infinite when unknown.
  virtual double l1_norm_bound() const = 0;

  /// Radius containing every entry when the operator is exactly finite.
  virtual std::optional<int> exact_radius() const = 0;
  /// Radius at which the ladder starts when nothing else is requested.
  virtual int start_radius() const = 0;
  /// Expected algebraic decay rate p of the truncation error (error ~ N^-p).
  virtual std::optional<double> decay_exponent() const { return std::nullopt; }

  virtual Complex diagonal(const MultiIndex& k) const = 0;
  /// Bound on sum |a_kk| over k outside window N.
  virtual double diagonal_tail(int radius) const = 0;
  /// Adds a_kk for r_lo < |k|_inf <= r_hi (r_lo = -1 includes the origin).
  virtual void add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const;
};

/// Stored sparse matrix plus a bound on its unstored tail.
class MatrixOperator final : public L1Operator {
 public:
  MatrixOperator(SparseL1Matrix matrix, TailModel tail);

  const SparseL1Matrix& matrix() const { return matrix_; }
  const TailModel& tail() const { return tail_; }

  int dimension() const override { return matrix_.dimension(); }
  Eigen::MatrixXcd section(const TruncationWindow& w) const override;
  TailSplit tail_split(const TruncationWindow& w) const override;
  double l1_norm_bound() const override;
  std::optional<int> exact_radius() const override;
  int start_radius() const override;
  std::optional<double> decay_exponent() const override { return tail_.decay_exponent(); }
  Complex diagonal(const MultiIndex& k) const override;
  double diagonal_tail(int radius) const override;
  void add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const override;

 private:
  SparseL1Matrix matrix_;
  TailModel tail_;
};

/// Calls f(k) for every k with r_lo < |k|_inf <= r_hi, in lexicographic order.
template <class F>
void for_each_in_shell(int dim, int r_lo, int r_hi, F&& f) {
  if (r_hi < 0 || r_hi <= r_lo) return;
  MultiIndex k = MultiIndex::zero(dim);
  for (int i = 0; i < dim; ++i) k[i] = -r_hi;
  const int last = dim - 1;
  while (true) {
    int inner_max = 0;
    for (int i = 0; i < last; ++i) inner_max = std::max(inner_max, k[i] < 0 ? -k[i] : k[i]);
    if (inner_max > r_lo) {
      for (int v = -r_hi; v <= r_hi; ++v) {
        k[last] = v;
        f(static_cast<const MultiIndex&>(k));
      }
    } else {
      for (int v = -r_hi; v <= r_hi; ++v) {
        if (v >= -r_lo && v <= r_lo) continue;
        k[last] = v;
        f(static_cast<const MultiIndex&>(k));
      }
    }
    int axis = last - 1;
    while (axis >= 0 && k[axis] == r_hi) {
      k[axis] = -r_hi;
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
}

}  // namespace torusdet
