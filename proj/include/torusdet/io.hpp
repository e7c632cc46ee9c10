#pragma once

// JSON input documents for matrices, symbols and Hill problems.
//
// Multi-indices are written as an integer (n = 1) or an array of n integers;
// complex numbers as {"re": x, "im": y} with "im" optional.
//
//   matrix: {"dimension", "entries": [{"row", "col", "re", "im"}],
//            "tail_bound": {"kind": "none" | "constant" | "power", "constant", "exponent"}}
//   symbol: {"dimension", "kind", ..., "order_m", "decay": {"order", "constant"}}
//     fractional_laplacian: "nu"
//     multiplier:           "bracket_power" (+ "scale") or "values": [{"index", "re", "im"}]
//     multiplication:       "coefficients": [{"index", "re", "im"}]
//     table:                "entries": [{"l", "k", "re", "im"}] or
//                           "separable": {"coefficients", "bracket_power", "scale"}
//     sum:                  "terms": [symbol, ...]
//   hill:   {"dimension", "nu", "potential": [{"index", "re", "im"}],
//            "scan": {"lambda_min", "lambda_max", "steps"}}

#include <optional>
#include <string>
#include <string_view>

#include "torusdet/hill.hpp"
#include "torusdet/l1_matrix.hpp"
#include "torusdet/toroidal.hpp"

namespace torusdet {

struct MatrixInput {
  SparseL1Matrix matrix;
  TailModel tail;
};

struct ScanGrid {
  double lambda_min = -100.0;
  double lambda_max = 5.0;
  /// Number of intervals; the grid has steps + 1 points.
  int steps = 200;
};

struct HillInput {
  HillProblem problem;
  std::optional<ScanGrid> scan;
};

/// Throws ParseError for malformed documents and ValidationError for
/// well-formed ones that break an invariant (e.g. nu <= dimension).
MatrixInput parse_matrix(std::string_view text);
ToroidalSymbol parse_symbol(std::string_view text);
HillInput parse_hill(std::string_view text);

/// Whole file as text; throws Error when it cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace torusdet
