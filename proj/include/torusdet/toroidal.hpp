#pragma once

// Toroidal symbols sigma(x, k) on T^n x Z^n, their matrices
// A[j,k] = sigma^(j-k, k) (sigma^ the Fourier transform in x), and the
// determinant transported through F^-1 A F.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "torusdet/l1_matrix.hpp"
#include "torusdet/poincare.hpp"

namespace torusdet {

struct SymbolCoefficient {
  MultiIndex l;
  Complex value;
};
/// Column k of the coefficient table: pairs (l, sigma^(l, k)).
using SymbolColumn = std::vector<SymbolCoefficient>;

/// sum_l |sigma^(l, k)| <= constant * <k>^order for every k.
struct SymbolDecay {
  double order = 0.0;
  double constant = 0.0;
};

class ToroidalSymbol {
 public:
  using MultiplierFn = std::function<Complex(const MultiIndex&)>;
  using ColumnFn = std::function<void(const MultiIndex&, SymbolColumn&)>;
  using SampleFn = std::function<Complex(std::span<const double>, const MultiIndex&)>;

  /// sigma(x, k) = m(k)
  struct Multiplier {
    MultiplierFn fn;
  };
  /// sigma(x, k) = q(x) = sum_l q^(l) e^{2 pi i x.l}
  struct Multiplication {
    LatticeSequence coefficients;
  };
  /// sigma^(., k) given column by column.
  struct CoefficientTable {
    ColumnFn column;
  };
  /// Black box sigma(x, k); columns come from an FFT over x on a grid.
  struct Sampled {
    SampleFn fn;
    int grid_size = 64;
  };
  struct Sum {
    std::vector<ToroidalSymbol> terms;
  };
  using Representation = std::variant<Multiplier, Multiplication, CoefficientTable, Sampled, Sum>;

  ToroidalSymbol(int dim, Representation rep, std::string label);

  static ToroidalSymbol multiplier(int dim, MultiplierFn fn, std::string label = "multiplier");
  /// Multiplier that vanishes outside the listed k.
  static ToroidalSymbol multiplier_table(int dim, const LatticeSequence& values);
  static ToroidalSymbol multiplication(int dim, LatticeSequence coefficients);
  static ToroidalSymbol table(int dim, ColumnFn column, std::string label = "table");
  /// Finite table of sigma^(l, k), keyed by (l, k).
  static ToroidalSymbol table(int dim, const std::map<std::pair<MultiIndex, MultiIndex>, Complex>& entries);
  /// sigma(x, k) = q(x) * scale * <k>^power, with q given by its coefficients.
  static ToroidalSymbol separable(int dim, LatticeSequence coefficients, double power, double scale = 1.0);
  static ToroidalSymbol sampled(int dim, SampleFn fn, int grid_size);
  static ToroidalSymbol sum(std::vector<ToroidalSymbol> terms);

  ToroidalSymbol& with_decay(double order, double constant);
  /// Declared order m (symbol class S^m); does not by itself give a tail bound.
  ToroidalSymbol& with_order(double order);
  /// Columns vanish for |k|_inf > r.
  ToroidalSymbol& with_support_radius(int r);

  int dimension() const { return dim_; }
  const Representation& representation() const { return rep_; }
  const std::string& label() const { return label_; }
  std::optional<double> order() const;
  std::optional<SymbolDecay> decay() const { return decay_; }
  std::optional<int> support_radius() const { return support_radius_; }

  Complex operator()(std::span<const double> x, const MultiIndex& k) const;
  /// Appends the coefficients of column k (possibly with repeated l).
  void append_column(const MultiIndex& k, SymbolColumn& out) const;
  /// Column k with repeated l merged, exact zeros removed, sorted by l.
  SymbolColumn column(const MultiIndex& k) const;
  /// As column(), reusing the storage of out.
  void column_into(const MultiIndex& k, SymbolColumn& out) const;

 private:
  int dim_;
  Representation rep_;
  std::string label_;
  std::optional<double> order_;
  std::optional<SymbolDecay> decay_;
  std::optional<int> support_radius_;
};

/// (2 pi)^nu |k|^nu, order nu.
ToroidalSymbol fractional_laplacian_symbol(double nu, int dim);
/// scale * <k>^power with decay metadata (power, |scale|).
ToroidalSymbol bracket_power_symbol(int dim, double power, double scale = 1.0);

enum class Summability { exact_finite, summable, not_summable, unknown };
std::string to_string(Summability s);

struct SymbolMatrix {
  SparseL1Matrix matrix;
  TailModel tail;
  Summability summability = Summability::unknown;
  std::string diagnostic;
};

/// A[j,k] = sigma^(j-k, k) for j, k in w. The tail model charges the exactly
/// known mass dropped at the window edge plus C * sum_{|k|_inf > N} <k>^m.
SymbolMatrix symbol_to_matrix(const ToroidalSymbol& sigma, const TruncationWindow& w);

/// sum_j A[j,k] e^{2 pi i x.(j-k)}
Complex matrix_to_symbol(const SparseL1Matrix& a, std::span<const double> x, const MultiIndex& k);

/// poincare_determinant of symbol_to_matrix(sigma, window(options.max_radius)).
/// Throws NotSummable for non-summable symbols and UnsupportedRepresentation
/// when nothing bounds the tail.
DeterminantResult det_gamma(const ToroidalSymbol& sigma, double tol, const LadderOptions& options = {});

/// The window det_gamma builds its matrix on.
TruncationWindow det_gamma_window(int dim, const LadderOptions& options);

}  // namespace torusdet
