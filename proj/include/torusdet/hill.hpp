#pragma once

// Hill's determinant method for (-Delta)^(nu/2) u + Q u = 0 on the torus.
//
// The damped matrix A[k,m] = g_{k-m} / ((2 pi)^nu |k|^nu + 1) satisfies
// (I + A) b = 0  <=>  (2 pi)^nu |k|^nu b_k + b_k + (g * b)_k = 0,
// i.e. it is the equation for the potential Q + 1. build_hill_matrix and
// hill_determinant keep that matrix as it is; everything that decides the
// equation for Q itself (existence_test, extract_null_solution,
// spectral_shift_scan) uses the same construction with g_0 replaced by g_0 - 1.

#include <span>
#include <string>
#include <vector>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/operator.hpp"
#include "torusdet/poincare.hpp"

namespace torusdet {

class HillProblem {
 public:
  /// Throws InfeasibleOrder unless nu > dimension.
  HillProblem(int dim, double nu, LatticeSequence potential);

  int dimension() const { return dim_; }
  double nu() const { return nu_; }
  /// Fourier coefficients g_k of Q; exact zeros removed.
  const LatticeSequence& potential() const { return g_; }
  double potential_l1() const { return g_l1_; }
  int potential_radius() const;

  /// (2 pi)^nu |k|^nu
  double multiplier(const MultiIndex& k) const;
  /// (2 pi)^nu |k|^nu + 1
  double damping(const MultiIndex& k) const { return multiplier(k) + 1.0; }
  /// Bound on sum over |k|_inf > N of 1 / damping(k).
  double damping_tail(int radius) const;

  /// The same problem with g_0 replaced by g_0 + c.
  HillProblem shifted(Complex c) const;

 private:
  int dim_;
  double nu_;
  LatticeSequence g_;
  double g_l1_ = 0.0;
  double two_pi_nu_ = 0.0;
  int integer_half_nu_ = -1;
};

/// Shift applied to g_0 to turn the damped matrix into the equation for Q.
inline constexpr double kEquationShift = -1.0;

/// The damped matrix generated window by window.
class HillOperator final : public L1Operator {
 public:
  explicit HillOperator(HillProblem problem);

  const HillProblem& problem() const { return p_; }

  int dimension() const override { return p_.dimension(); }
  Eigen::MatrixXcd section(const TruncationWindow& w) const override;
  TailSplit tail_split(const TruncationWindow& w) const override;
  double l1_norm_bound() const override { return l1_bound_; }
  std::optional<int> exact_radius() const override;
  int start_radius() const override;
  std::optional<double> decay_exponent() const override { return p_.nu() - p_.dimension(); }
  Complex diagonal(const MultiIndex& k) const override;
  double diagonal_tail(int radius) const override;
  void add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const override;

 private:
  HillProblem p_;
  Complex g0_;
  std::vector<std::pair<MultiIndex, Complex>> terms_;
  double l1_bound_ = 0.0;
};

struct HillMatrix {
  SparseL1Matrix matrix;
  /// Constant bound on everything outside window x window.
  TailModel tail;
};

HillMatrix build_hill_matrix(const HillProblem& p, const TruncationWindow& w);

DeterminantResult hill_determinant(const HillProblem& p, double tol, const LadderOptions& options = {});

enum class Existence { nontrivial_solution, only_trivial, undecided };
std::string to_string(Existence e);

struct ExistenceReport {
  Existence decision = Existence::undecided;
  /// Determinant of the equation matrix (g_0 - 1) the decision is based on.
  DeterminantResult determinant;
};

ExistenceReport existence_test(const HillProblem& p, double tol, LadderOptions options = {});

struct SolutionCandidate {
  /// Coefficients of u, ||b||_2 = 1, largest entry real positive.
  LatticeSequence b;
  /// || (2 pi)^nu |k|^nu b + g * b ||_2 over the window.
  double residual = 0.0;
  /// sum |k|^nu |b_k| over the window.
  double regularity_mass = 0.0;
  /// (2 pi)^-nu (||g||_1 ||b||_1 + ||r||_1), which regularity_mass cannot exceed.
  double regularity_bound = 0.0;
  double smallest_singular_value = 0.0;
  TruncationWindow window;
};

/// Throws NoNullSolution when the smallest singular value exceeds threshold.
SolutionCandidate extract_null_solution(const HillProblem& p, const TruncationWindow& w,
                                        double threshold = 1e-6);

enum class BracketKind { sign_change, exact_zero, dip };
std::string to_string(BracketKind k);

struct ScanPoint {
  double lambda = 0.0;
  Complex det;
  double certified_error = 0.0;
};

struct ScanBracket {
  double lo = 0.0;
  double hi = 0.0;
  BracketKind kind = BracketKind::sign_change;
};

struct ScanRoot {
  double lambda = 0.0;
  double abs_det = 0.0;
  double certified_error = 0.0;
  ScanBracket bracket;
};

struct RejectedBracket {
  ScanBracket bracket;
  double lambda = 0.0;
  double abs_det = 0.0;
  double certified_error = 0.0;
};

struct SpectralScan {
  int radius = 0;
  std::vector<ScanPoint> points;
  std::vector<ScanBracket> brackets;
  /// Sorted by lambda; -lambda approximates an eigenvalue of (-Delta)^(nu/2) + Q.
  std::vector<ScanRoot> roots;
  /// Refined candidates whose |det| stayed above max(tol, 10 * error).
  std::vector<RejectedBracket> rejected;
};

struct ScanOptions {
  /// Every determinant is taken on this one window, so roots are exactly the
  /// shifts at which the truncated equation matrix is singular.
  int radius = 64;
  std::size_t max_section_size = 2048;
  int subdivisions = 32;
  int max_depth = 3;
  int max_iterations = 60;
};

/// Evaluates the equation determinant for the potential Q + lambda on the grid.
SpectralScan spectral_shift_scan(const HillProblem& p, std::span<const double> lambdas, double tol,
                                 const ScanOptions& options = {});

/// steps + 1 equally spaced points from lo to hi.
std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace torusdet
