#pragma once

// The algebra l1(Z^n x Z^n): finitely supported complex matrices indexed by
// multi-indices, their l1 norm, products, action on sequences, and finite
// sections with their trace and determinant.
//
// Convention: row = output index, (A x)_j = sum_k A[j,k] x_k.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "torusdet/lattice.hpp"

namespace torusdet {

struct MatrixEntry {
  MultiIndex row;
  MultiIndex col;
  Complex value;
};

class SparseL1Matrix {
 public:
  explicit SparseL1Matrix(int dim = 1);
  /// Duplicate (row, col) pairs are summed; exact zeros are dropped.
  SparseL1Matrix(int dim, std::span<const MatrixEntry> entries);

  int dimension() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Sorted by (row, col) lexicographically.
  const std::vector<MatrixEntry>& entries() const { return entries_; }
  Complex at(const MultiIndex& row, const MultiIndex& col) const;
  std::vector<MatrixEntry> column(const MultiIndex& col) const;

  double l1_norm() const { return l1_norm_; }
  double recompute_l1_norm() const;
  /// Smallest N with every stored row and column in [-N, N]^n; 0 when empty.
  int support_radius() const;

 private:
  int dim_;
  std::vector<MatrixEntry> entries_;
  double l1_norm_ = 0.0;
};

/// Sum of |a_jk|. Magnitudes are accumulated in ascending order, so the value
/// depends only on the multiset of entries (transpose preserves it bit-exactly).
double l1_norm(const SparseL1Matrix& a);
double l1_mass(std::span<const double> magnitudes);

SparseL1Matrix transpose(const SparseL1Matrix& a);
/// (AB)[j,l] = sum_i A[j,i] B[i,l]. Throws DimensionMismatch.
SparseL1Matrix compose(const SparseL1Matrix& a, const SparseL1Matrix& b);
/// y_j = sum_k A[j,k] x_k; ||y||_p <= ||A||_1 ||x||_p for every p >= 1.
LatticeSequence apply(const SparseL1Matrix& a, const LatticeSequence& x);

/// Upper bound on the l1 mass a matrix carries outside the stored entries.
class TailModel {
 public:
  enum class Kind { exact_finite, user_bound };

  /// Everything is stored: nothing lies outside.
  static TailModel exact();
  /// bound(N) = constant * N^-exponent for N >= 1, infinite at N = 0.
  static TailModel power_law(double constant, double exponent);
  static TailModel constant(double mass);
  static TailModel custom(std::function<double(int)> bound,
                          std::optional<double> decay_exponent = std::nullopt);
  /// No finite bound is known (non-summable or unknown tail).
  static TailModel unbounded();

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::exact_finite; }
  /// Mass of unstored entries lying outside window N.
  double bound(int radius) const;
  std::optional<double> decay_exponent() const { return decay_exponent_; }

 private:
  Kind kind_ = Kind::exact_finite;
  std::function<double(int)> bound_;
  std::optional<double> decay_exponent_;
};

/// l1 mass of the three off-window blocks for window radius N:
/// in_to_out = rows inside / columns outside, out_to_in = rows outside /
/// columns inside, outer = both outside. `mass` bounds the whole discarded
/// part; it can be smaller than the sum of the blocks when unstored mass is
/// charged to every block.
struct TailSplit {
  double in_to_out = 0.0;
  double out_to_in = 0.0;
  double outer = 0.0;
  double mass = 0.0;
};

/// Dense restriction of a matrix to window x window, labelled by enumerate_window.
struct FiniteSection {
  TruncationWindow window;
  Eigen::MatrixXcd matrix;
};

struct Truncation {
  FiniteSection section;
  /// Discarded stored mass plus the tail model bound at the window radius.
  double tail_norm = 0.0;
  TailSplit split;
};

Eigen::MatrixXcd dense_section(const SparseL1Matrix& a, const TruncationWindow& w);
Truncation truncate(const SparseL1Matrix& a, const TailModel& tail, const TruncationWindow& w);

Complex finite_trace(const FiniteSection& f);
/// det(I + F) by partial-pivot LU.
Complex finite_determinant(const FiniteSection& f);
Complex finite_determinant(const Eigen::MatrixXcd& f);
/// det(M) by partial-pivot LU (M taken by value and factored in place).
Complex lu_determinant(Eigen::MatrixXcd m);

}  // namespace torusdet
