#include "torusdet/operator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace torusdet {

void L1Operator::add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const {
  for_each_in_shell(dimension(), r_lo, r_hi, [&](const MultiIndex& k) { acc.add(diagonal(k)); });
}

MatrixOperator::MatrixOperator(SparseL1Matrix matrix, TailModel tail)
    : matrix_(std::move(matrix)), tail_(std::move(tail)) {}

Eigen::MatrixXcd MatrixOperator::section(const TruncationWindow& w) const {
  return dense_section(matrix_, w);
}

TailSplit MatrixOperator::tail_split(const TruncationWindow& w) const {
  std::vector<double> wc, cw, cc;
  for (const auto& e : matrix_.entries()) {
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
  const double unstored = tail_.bound(w.radius);
  TailSplit s;
  s.in_to_out = l1_mass(wc) + unstored;
  s.out_to_in = l1_mass(cw) + unstored;
  s.outer = l1_mass(cc) + unstored;
  std::vector<double> all = std::move(wc);
  all.insert(all.end(), cw.begin(), cw.end());
  all.insert(all.end(), cc.begin(), cc.end());
  s.mass = l1_mass(all) + unstored;
  return s;
}

double MatrixOperator::l1_norm_bound() const { return matrix_.l1_norm() + tail_.bound(0); }

std::optional<int> MatrixOperator::exact_radius() const {
  if (!tail_.is_exact()) return std::nullopt;
  return matrix_.support_radius();
}

int MatrixOperator::start_radius() const { return std::clamp(matrix_.support_radius(), 1, 8); }

Complex MatrixOperator::diagonal(const MultiIndex& k) const { return matrix_.at(k, k); }

double MatrixOperator::diagonal_tail(int radius) const {
  std::vector<double> mags;
  for (const auto& e : matrix_.entries()) {
    if (e.row == e.col && e.row.max_abs() > radius) mags.push_back(std::abs(e.value));
  }
  return l1_mass(mags) + tail_.bound(radius);
}

void MatrixOperator::add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const {
  for (const auto& e : matrix_.entries()) {
    if (e.row != e.col) continue;
    const int r = e.row.max_abs();
    if (r > r_lo && r <= r_hi) acc.add(e.value);
  }
}

}  // namespace torusdet
