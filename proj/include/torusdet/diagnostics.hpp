#pragma once

// Sampled checks on toroidal symbols: strong ellipticity, the decay order of
// k-differences, and membership of the matrix in l1(Z^n x Z^n).

#include <string>
#include <vector>

#include "torusdet/toroidal.hpp"

namespace torusdet {

struct EllipticityReport {
  bool passed = false;
  /// min of Re sigma(x,k) / <k>^m over samples with |k| >= n0.
  double C0 = 0.0;
  /// Smallest integer above every |k| where Re sigma(x,k) <= 0 was sampled.
  int n0 = 0;
  std::vector<double> worst_x;
  MultiIndex worst_k;
  int x_samples_per_axis = 0;
  std::size_t violations = 0;
};

/// Sweeps x over a grid (at most x_grid points per axis, fewer in higher
/// dimension) and k over w. Passes when n0 <= N/2 and C0 > 0.
EllipticityReport strong_ellipticity_check(const ToroidalSymbol& sigma, double m, const TruncationWindow& w,
                                           int x_grid);

struct OrderFit {
  MultiIndex alpha;
  /// Every sampled difference was exactly zero.
  bool vanishing = false;
  /// Slope of log max|Delta^alpha sigma| against log <k> over |k| shells.
  double exponent = 0.0;
  /// exponent + |alpha|
  double implied_order = 0.0;
  /// max over shells of max|Delta^alpha sigma| / <k>^exponent.
  double constant = 0.0;
  int shells = 0;
};

struct OrderDiagnostic {
  /// implied order of the alpha = 0 fit.
  double order_estimate = 0.0;
  std::vector<OrderFit> fits;
  int x_samples_per_axis = 0;
};

/// Throws InvalidArgument when w has fewer than 4 distinct nonzero |k| shells.
OrderDiagnostic symbol_order_diagnostic(const ToroidalSymbol& sigma, const MultiIndex& alpha_max,
                                        const TruncationWindow& w, int x_grid);

struct NormStep {
  int radius = 0;
  /// sum over j, k in the window of |sigma^(j-k, k)|
  double norm = 0.0;
  /// norm + mass dropped at the window edge + the decay tail; infinite without a decay bound.
  double upper = 0.0;
};

struct L1Membership {
  bool in_l1 = false;
  double order = 0.0;
  /// "metadata", "estimated" or "finite".
  std::string order_source;
  bool boundary_warning = false;
  std::vector<NormStep> ladder;
  double limit_estimate = 0.0;
  std::string message;
};

struct L1MembershipOptions {
  double tol = 1e-6;
  int max_radius = 1 << 22;
  std::size_t max_points = std::size_t{1} << 23;
  /// Ladder limit used when the order already rules membership out.
  int divergent_max_radius = 64;
};

/// in_l1 requires order m < -n and a Cauchy ladder: the certified gap
/// upper - norm, or the last ladder step, below tol.
L1Membership l1_membership_check(const ToroidalSymbol& sigma, const L1MembershipOptions& options = {});

/// Truncated l1 norm and the mass dropped at the edge, for one window.
NormStep truncated_norm(const ToroidalSymbol& sigma, const TruncationWindow& w);

}  // namespace torusdet
