#pragma once

// Multi-indices on Z^n, box truncation windows, the Japanese bracket and
// forward finite differences.

#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "torusdet/errors.hpp"

namespace torusdet {

using Complex = std::complex<double>;

inline constexpr int kMaxDimension = 4;

/// A point of Z^n, 1 <= n <= kMaxDimension. Ordering is lexicographic on
/// the coordinates, which is the canonical enumeration order everywhere.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> coords);
  explicit MultiIndex(std::span<const int> coords);

  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis);

  int dimension() const { return dim_; }
  int operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const int> coords() const { return {coords_.data(), static_cast<std::size_t>(dim_)}; }

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex operator-() const;

  std::int64_t norm_squared() const;
  double norm() const { return std::sqrt(static_cast<double>(norm_squared())); }
  /// max_i |k_i|
  int max_abs() const;
  /// sum_i k_i, used as |alpha| for nonnegative orders.
  int total() const;

  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::array<int, kMaxDimension> coords_{};
  int dim_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& k) const noexcept;
};

void require_same_dimension(const MultiIndex& a, const MultiIndex& b);
void require_dimension(int dim);

/// Finitely supported sequence Z^n -> C, keyed in canonical order.
using LatticeSequence = std::map<MultiIndex, Complex>;

/// (sum |x_k|^p)^(1/p) in canonical order; p = infinity gives the max.
double lp_norm(const LatticeSequence& x, double p);

/// The box [-N, N]^n. Windows are nested: window(N) is contained in window(N+1).
struct TruncationWindow {
  int dim = 1;
  int radius = 0;

  TruncationWindow() = default;
  TruncationWindow(int dimension, int r);

  /// (2N+1)^n
  std::size_t size() const;
  int side() const { return 2 * radius + 1; }
  bool contains(const MultiIndex& k) const;
  /// Position of k in enumerate_window order. k must lie in the window.
  std::size_t index_of(const MultiIndex& k) const;
  MultiIndex point_at(std::size_t index) const;

  friend bool operator==(const TruncationWindow&, const TruncationWindow&) = default;
};

/// All points of the window in lexicographic order, from (-N,...,-N) to (N,...,N).
std::vector<MultiIndex> enumerate_window(const TruncationWindow& w);

/// <k> = (1 + |k|^2)^(1/2)
inline double bracket(const MultiIndex& k) {
  return std::sqrt(1.0 + static_cast<double>(k.norm_squared()));
}

double binomial(int n, int k);

/// Delta_k^alpha phi(k) = sum_{beta <= alpha} (-1)^{|alpha-beta|} C(alpha, beta) phi(k + beta).
/// Throws InvalidOrder if alpha has a negative entry.
template <class Phi>
Complex forward_difference(Phi&& phi, const MultiIndex& alpha, const MultiIndex& k) {
  require_same_dimension(alpha, k);
  const int n = alpha.dimension();
  for (int i = 0; i < n; ++i) {
    if (alpha[i] < 0) {
      throw InvalidOrder("difference order must be nonnegative, got " + alpha.to_string());
    }
  }
  MultiIndex beta = MultiIndex::zero(n);
  Complex sum{0.0, 0.0};
  const int alpha_total = alpha.total();
  while (true) {
    double coef = ((alpha_total - beta.total()) % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) coef *= binomial(alpha[i], beta[i]);
    sum += coef * Complex(phi(k + beta));
    int axis = n - 1;
    while (axis >= 0 && beta[axis] == alpha[axis]) {
      beta[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++beta[axis];
  }
  return sum;
}

}  // namespace torusdet
