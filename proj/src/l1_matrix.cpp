#include "torusdet/l1_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace torusdet {

namespace {

bool entry_less(const MatrixEntry& a, const MatrixEntry& b) {
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

void require_matrix_dimension(int dim, const MultiIndex& k) {
  if (k.dimension() != dim) {
    throw DimensionMismatch("entry index " + k.to_string() + " does not have dimension " +
                            std::to_string(dim));
  }
}

}  // namespace

double l1_mass(std::span<const double> magnitudes) {
  std::vector<double> sorted(magnitudes.begin(), magnitudes.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double m : sorted) sum += m;
  return sum;
}

SparseL1Matrix::SparseL1Matrix(int dim) : dim_(dim) { require_dimension(dim); }

SparseL1Matrix::SparseL1Matrix(int dim, std::span<const MatrixEntry> entries) : dim_(dim) {
  require_dimension(dim);
  std::vector<MatrixEntry> sorted(entries.begin(), entries.end());
  for (const auto& e : sorted) {
    require_matrix_dimension(dim, e.row);
    require_matrix_dimension(dim, e.col);
  }
  std::stable_sort(sorted.begin(), sorted.end(), entry_less);
  entries_.reserve(sorted.size());
  for (const auto& e : sorted) {
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const MatrixEntry& e) { return e.value == Complex(0.0, 0.0); });
  l1_norm_ = recompute_l1_norm();
}

Complex SparseL1Matrix::at(const MultiIndex& row, const MultiIndex& col) const {
  MatrixEntry key{row, col, {}};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, entry_less);
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return {0.0, 0.0};
}

std::vector<MatrixEntry> SparseL1Matrix::column(const MultiIndex& col) const {
  std::vector<MatrixEntry> out;
  for (const auto& e : entries_) {
    if (e.col == col) out.push_back(e);
  }
  return out;
}

double SparseL1Matrix::recompute_l1_norm() const {
  std::vector<double> mags;
  mags.reserve(entries_.size());
  for (const auto& e : entries_) mags.push_back(std::abs(e.value));
  return l1_mass(mags);
}

int SparseL1Matrix::support_radius() const {
  int r = 0;
  for (const auto& e : entries_) r = std::max({r, e.row.max_abs(), e.col.max_abs()});
  return r;
}

double l1_norm(const SparseL1Matrix& a) { return a.l1_norm(); }

SparseL1Matrix transpose(const SparseL1Matrix& a) {
  std::vector<MatrixEntry> t;
  t.reserve(a.nnz());
  for (const auto& e : a.entries()) t.push_back({e.col, e.row, e.value});
  return SparseL1Matrix(a.dimension(), t);
}

SparseL1Matrix compose(const SparseL1Matrix& a, const SparseL1Matrix& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("compose: dimensions " + std::to_string(a.dimension()) + " and " +
                            std::to_string(b.dimension()) + " differ");
  }
  // b's entries are sorted by row, so rows of b form contiguous ranges.
  const auto& be = b.entries();
  std::map<std::pair<MultiIndex, MultiIndex>, Complex> acc;
  for (const auto& ea : a.entries()) {
    MatrixEntry key{ea.col, MultiIndex::zero(a.dimension()), {}};
    auto it = std::lower_bound(be.begin(), be.end(), key,
                               [](const MatrixEntry& x, const MatrixEntry& y) { return x.row < y.row; });
    for (; it != be.end() && it->row == ea.col; ++it) {
      acc[{ea.row, it->col}] += ea.value * it->value;
    }
  }
  std::vector<MatrixEntry> out;
  out.reserve(acc.size());
  for (const auto& [key, v] : acc) out.push_back({key.first, key.second, v});
  return SparseL1Matrix(a.dimension(), out);
}

LatticeSequence apply(const SparseL1Matrix& a, const LatticeSequence& x) {
  LatticeSequence y;
  for (const auto& e : a.entries()) {
    auto it = x.find(e.col);
    if (it == x.end()) continue;
    y[e.row] += e.value * it->second;
  }
  return y;
}

// --- TailModel -------------------------------------------------------------

TailModel TailModel::exact() { return TailModel{}; }

TailModel TailModel::power_law(double constant, double exponent) {
  if (!(constant >= 0.0) || !(exponent > 0.0)) {
    throw InvalidArgument("power-law tail needs constant >= 0 and exponent > 0");
  }
  TailModel t;
  t.kind_ = Kind::user_bound;
  t.bound_ = [constant, exponent](int n) {
    if (n <= 0) return std::numeric_limits<double>::infinity();
    return constant * std::pow(static_cast<double>(n), -exponent);
  };
  t.decay_exponent_ = exponent;
  return t;
}

TailModel TailModel::constant(double mass) {
  if (!(mass >= 0.0)) throw InvalidArgument("tail mass must be nonnegative");
  TailModel t;
  t.kind_ = Kind::user_bound;
  t.bound_ = [mass](int) { return mass; };
  return t;
}

TailModel TailModel::custom(std::function<double(int)> bound, std::optional<double> decay_exponent) {
  TailModel t;
  t.kind_ = Kind::user_bound;
  t.bound_ = std::move(bound);
  t.decay_exponent_ = decay_exponent;
  return t;
}

TailModel TailModel::unbounded() {
  return constant(std::numeric_limits<double>::infinity());
}

double TailModel::bound(int radius) const {
  if (kind_ == Kind::exact_finite) return 0.0;
  return bound_(radius);
}

// --- Sections ----------------------------------------------------------------

Eigen::MatrixXcd dense_section(const SparseL1Matrix& a, const TruncationWindow& w) {
  if (w.dim != a.dimension()) throw DimensionMismatch("window and matrix dimensions differ");
  const auto m = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& e : a.entries()) {
    if (w.contains(e.row) && w.contains(e.col)) {
      dense(static_cast<Eigen::Index>(w.index_of(e.row)),
            static_cast<Eigen::Index>(w.index_of(e.col))) = e.value;
    }
  }
  return dense;
}

Truncation truncate(const SparseL1Matrix& a, const TailModel& tail, const TruncationWindow& w) {
  Truncation t;
  t.section = {w, dense_section(a, w)};
  std::vector<double> wc, cw, cc;
  for (const auto& e : a.entries()) {
    const bool row_in = w.contains(e.row);
    const bool col_in = w.contains(e.col);
    if (row_in && col_in) continue;
    const double mag = std::abs(e.value);
    if (row_in) {
      wc.push_back(mag);
    } else if (col_in) {
      cw.push_back(mag);
    } else {
      cc.push_back(mag);
    }
  }
  const double unstored = tail.bound(w.radius);
  std::vector<double> all;
  all.insert(all.end(), wc.begin(), wc.end());
  all.insert(all.end(), cw.begin(), cw.end());
  all.insert(all.end(), cc.begin(), cc.end());
  t.tail_norm = l1_mass(all) + unstored;
  // Unstored mass could sit in any block, so each block is charged with all of it.
  t.split.in_to_out = l1_mass(wc) + unstored;
  t.split.out_to_in = l1_mass(cw) + unstored;
  t.split.outer = l1_mass(cc) + unstored;
  t.split.mass = t.tail_norm;
  return t;
}

Complex finite_trace(const FiniteSection& f) {
  Complex s{0.0, 0.0};
  for (Eigen::Index i = 0; i < f.matrix.rows(); ++i) s += f.matrix(i, i);
  return s;
}

Complex lu_determinant(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  Complex det{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(m(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return {0.0, 0.0};
    if (pivot != k) {
      m.row(k).swap(m.row(pivot));
      det = -det;
    }
    const Complex p = m(k, k);
    det *= p;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex factor = m(i, k) / p;
      if (factor == Complex(0.0, 0.0)) continue;
      m.row(i).tail(n - k - 1).noalias() -= factor * m.row(k).tail(n - k - 1);
    }
  }
  return det;
}

Complex finite_determinant(const Eigen::MatrixXcd& f) {
  Eigen::MatrixXcd m = f;
  m.diagonal().array() += Complex(1.0, 0.0);
  return lu_determinant(std::move(m));
}

Complex finite_determinant(const FiniteSection& f) { return finite_determinant(f.matrix); }

}  // namespace torusdet
