#pragma once

// Trace and determinant of I + A for A in l1(Z^n x Z^n), as limits over
// nested box windows, with certified truncation error bounds.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/operator.hpp"

namespace torusdet {

struct LadderStep {
  int radius = 0;
  Complex value;
  /// Certified bound on |limit - value| at this radius.
  double bound = 0.0;
};

struct DeterminantResult {
  Complex value{1.0, 0.0};
  std::vector<LadderStep> ladder;
  double certified_error = 0.0;
  bool converged = false;
  /// 0 when value is the last rung, otherwise the extrapolation level used.
  int extrapolation_level = 0;
};

struct TraceResult {
  Complex value;
  double certified_error = 0.0;
  bool converged = false;
  std::vector<LadderStep> ladder;
};

struct LadderOptions {
  int max_radius = 64;
  /// Largest dense section (2N+1)^n evaluated.
  std::size_t max_section_size = 2048;
  std::optional<int> start_radius;
  /// Extrapolate over the ladder when the bound never reaches tol.
  bool extrapolate = true;
  /// Throw NonConvergence instead of returning an unconverged result.
  bool require_convergence = true;
  /// Sections above this size use the cheap coupling estimate only.
  std::size_t max_svd_size = 1024;
};

struct TraceOptions {
  int max_radius = 1 << 25;
  std::size_t max_points = std::size_t{1} << 26;
  bool require_convergence = true;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<LadderStep> steps, Complex last_value,
                 double error)
      : Error(what), ladder(std::move(steps)), value(last_value), certified_error(error) {}
  std::vector<LadderStep> ladder;
  Complex value;
  double certified_error;
};

/// Both certified bounds on |det(I+A) - det(I+F_N)| for a section F_N.
struct SectionBound {
  /// mass * exp(||A||_1 + 1)
  double lipschitz = 0.0;
  /// Schur-complement bound; infinite unless the outer block has mass < 1.
  double block = 0.0;
  double value() const { return lipschitz < block ? lipschitz : block; }
};

/// Entrywise l1 sum of a dense matrix.
double entrywise_l1(const Eigen::MatrixXcd& f);

/// With X = I + F, s = in_to_out * out_to_in / (1 - outer) and
/// delta >= |det(X - E) - det X| for any coupling E with column mass <= s:
///   |det(I+A) - det X| <= expm1(outer) (|det X| + delta) + delta.
/// delta is exp(||F||_1) expm1(s), or sum_k P_k s^k / k! with P_k the product
/// of the m-k largest singular values of X when that is needed to reach tol.
SectionBound section_error_bound(const Eigen::MatrixXcd& f, Complex det, const TailSplit& split,
                                 double l1_norm_bound, double tol, std::size_t max_svd_size);

struct Extrapolation {
  Complex value;
  int level = 0;
  /// |E(level, last) - E(level, last-1)|
  double spread = 0.0;
};

/// Fits value(N) = D + c_1 N^-p + c_2 N^-(p+1) + ... over trailing rungs and
/// picks the level whose estimate moved least between the last two rungs.
Extrapolation richardson(std::span<const LadderStep> ladder, double p);

DeterminantResult poincare_determinant(const L1Operator& a, double tol,
                                       const LadderOptions& options = {});
DeterminantResult poincare_determinant(const SparseL1Matrix& a, const TailModel& tail, double tol,
                                       const LadderOptions& options = {});

TraceResult poincare_trace(const L1Operator& a, double tol, const TraceOptions& options = {});
TraceResult poincare_trace(const SparseL1Matrix& a, const TailModel& tail, double tol,
                           const TraceOptions& options = {});

enum class Invertibility { invertible, singular, undecided };
std::string to_string(Invertibility d);

/// invertible: |value| > error; singular: |value| + error < tol; else undecided.
Invertibility classify_determinant(const DeterminantResult& det, double tol);

struct InvertibilityReport {
  Invertibility decision = Invertibility::undecided;
  DeterminantResult determinant;
};

/// Never throws on non-convergence: an unconverged ladder still carries a
/// certified error, and the three-valued decision is sound for any error.
InvertibilityReport invertibility_test(const L1Operator& a, double tol, LadderOptions options = {});
InvertibilityReport invertibility_test(const SparseL1Matrix& a, const TailModel& tail, double tol,
                                       LadderOptions options = {});

}  // namespace torusdet
