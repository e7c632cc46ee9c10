#pragma once

// Fourier analysis on the unit torus T^n = [0,1)^n with the convention
// f^(k) = int e^{-2 pi i x.k} f(x) dx, f(x) = sum_k e^{2 pi i x.k} f^(k),
// discretized on uniform grids of M points per axis.

#include <functional>
#include <span>
#include <vector>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/lattice.hpp"

namespace torusdet {

/// Samples at x = (j_1/M, ..., j_n/M), 0 <= j_i < M, row-major (last axis fastest).
struct GridFunction {
  int dim = 1;
  int grid_size = 1;
  std::vector<Complex> samples;

  GridFunction() = default;
  GridFunction(int dimension, int m);

  static GridFunction sample(int dimension, int m,
                             const std::function<Complex(std::span<const double>)>& f);

  std::size_t size() const { return samples.size(); }
  /// Coordinates of sample i.
  std::vector<double> point(std::size_t i) const;
};

/// Largest N with M > 2N.
inline int alias_free_radius(int grid_size) { return (grid_size - 1) / 2; }

/// Coefficients on window w via the normalized DFT. Throws AliasingError when M <= 2N.
LatticeSequence fourier_coeffs(const GridFunction& f, const TruncationWindow& w);

/// sum_k c_k e^{2 pi i x.k} on the grid. Throws AliasingError when a nonzero
/// coefficient lies outside the alias-free window of M.
GridFunction synthesize(const LatticeSequence& coeffs, int dim, int grid_size);

/// F^-1 A F f on the grid of f. Coefficients of f below 1e-13 of the largest
/// are treated as zero; results leaving the alias-free window are refused.
GridFunction gamma_apply(const SparseL1Matrix& a, const GridFunction& f);

/// (sum_k <k>^(2s) |u_k|^2)^(1/2)
double sobolev_norm(const LatticeSequence& coeffs, double s);

/// (int |f|^2 dx)^(1/2) by the grid quadrature.
double grid_l2_norm(const GridFunction& f);

}  // namespace torusdet
