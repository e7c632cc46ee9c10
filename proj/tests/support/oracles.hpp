#pragma once

// Independent reference values and random generators shared by the tests.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/lattice.hpp"

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPiSq = 4.0 * kPi * kPi;

/// prod_{k in Z} (1 + c / (4 pi^2 k^2 + 1)) via prod_{k>=1} (1 + a/k^2) = sinh(pi sqrt a) / (pi sqrt a).
inline double sinh_product(double c) {
  const double s = std::sqrt(1.0 + c) / 2.0;
  const double ratio = (std::sinh(s) / s) / (std::sinh(0.5) / 0.5);
  return (1.0 + c) * ratio * ratio;
}

/// sum_{k in Z} 1 / (4 pi^2 k^2 + 1)
inline double coth_sum() { return 0.5 / std::tanh(0.5); }

/// sum_{k in Z} 1 / (1 + k^2)
inline double pi_coth_pi() { return kPi / std::tanh(kPi); }

/// det(I + F) as the product of 1 + eigenvalues.
inline Complex eigen_determinant(const Eigen::MatrixXcd& f) {
  if (f.rows() == 0) return {1.0, 0.0};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(f, false);
  Complex p{1.0, 0.0};
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) p *= 1.0 + es.eigenvalues()[i];
  return p;
}

/// Eigenvalues of 4 pi^2 k^2 delta_km + g_{k-m} on |k| <= radius for real even g.
inline std::vector<double> hill_eigenvalues(double q, int radius) {
  const int m = 2 * radius + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double k = i - radius;
    h(i, i) = kFourPiSq * k * k;
    if (i + 1 < m) {
      h(i, i + 1) = q;
      h(i + 1, i) = q;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

inline Complex random_complex(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  while (true) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) <= scale && z != Complex(0.0, 0.0)) return z;
  }
}

inline torusdet::MultiIndex random_index(std::mt19937& rng, int dim, int radius) {
  std::uniform_int_distribution<int> u(-radius, radius);
  torusdet::MultiIndex k = torusdet::MultiIndex::zero(dim);
  for (int i = 0; i < dim; ++i) k[i] = u(rng);
  return k;
}

/// Up to max_entries entries with |a| <= scale and indices in [-radius, radius]^n.
inline torusdet::SparseL1Matrix random_matrix(std::mt19937& rng, int dim, int max_entries, double scale,
                                              int radius = 4) {
  std::uniform_int_distribution<int> count(1, max_entries);
  std::vector<torusdet::MatrixEntry> e;
  const int c = count(rng);
  for (int i = 0; i < c; ++i) {
    e.push_back({random_index(rng, dim, radius), random_index(rng, dim, radius), random_complex(rng, scale)});
  }
  return torusdet::SparseL1Matrix(dim, e);
}

inline Eigen::MatrixXcd random_dense(std::mt19937& rng, int rows, int cols, double scale) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng, scale);
  }
  return m;
}

inline torusdet::LatticeSequence random_sequence(std::mt19937& rng, int dim, int count, int radius) {
  torusdet::LatticeSequence x;
  for (int i = 0; i < count; ++i) x[random_index(rng, dim, radius)] = random_complex(rng, 1.0);
  return x;
}

inline double relative_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
