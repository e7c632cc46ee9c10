#include "doctest.h"
#include "torusdet/io.hpp"

using namespace torusdet;

namespace {

std::string data(const std::string& name) { return read_text_file(std::string(TORUSDET_TEST_DATA) + "/" + name); }

template <class F>
ParseError parse_failure(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("");
}

}  // namespace

TEST_CASE("matrix documents") {
  const MatrixInput in = parse_matrix(data("diag_matrix.json"));
  CHECK(in.matrix.dimension() == 1);
  CHECK(in.matrix.nnz() == 3);
  CHECK(in.matrix.at(MultiIndex{1}, MultiIndex{0}) == Complex(0.25, -0.25));
  CHECK(in.tail.is_exact());

  const MatrixInput two = parse_matrix(R"({"dimension": 2,
    "entries": [{"row": [1, -1], "col": [0, 0], "re": 2}],
    "tail_bound": {"kind": "power", "constant": 3, "exponent": 2}})");
  CHECK(two.matrix.at(MultiIndex{1, -1}, MultiIndex{0, 0}) == Complex(2.0, 0.0));
  CHECK(two.tail.bound(2) == 0.75);
  CHECK(parse_matrix(R"({"dimension": 1, "entries": [], "tail_bound": {"kind": "constant", "constant": 0.5}})")
            .tail.bound(9) == 0.5);
  CHECK(parse_matrix(data("zero_matrix.json")).matrix.nnz() == 0);
}

TEST_CASE("errors carry the line and field") {
  const ParseError e = parse_failure([] { parse_matrix(data("malformed.json")); });
  CHECK(e.line == 5);
  CHECK(e.field == "entries[1].col");
  CHECK(std::string(e.what()).find("line 5") != std::string::npos);

  const ParseError s = parse_failure([] { parse_matrix(data("broken_syntax.json")); });
  CHECK(s.line == 4);

  const ParseError missing = parse_failure([] { parse_matrix("{\n  \"entries\": []\n}"); });
  CHECK(missing.field == "dimension");

  const ParseError kind = parse_failure([] { parse_symbol(R"({"dimension": 1, "kind": "wavelet"})"); });
  CHECK(kind.field == "kind");

  const ParseError tail =
      parse_failure([] { parse_matrix(R"({"dimension": 1, "entries": [], "tail_bound": {"kind": "magic"}})"); });
  CHECK(tail.field == "tail_bound.kind");
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(parse_hill(data("hill_bad_nu.json")), ValidationError);
  CHECK_THROWS_AS(parse_matrix(R"({"dimension": 5, "entries": []})"), ValidationError);
  CHECK_THROWS_AS(parse_matrix(R"({"dimension": 2, "entries": [{"row": 1, "col": [0, 0], "re": 1}]})"), ParseError);
}

TEST_CASE("symbol documents") {
  const double x[] = {0.25};
  const ToroidalSymbol lap = parse_symbol(data("laplacian.json"));
  CHECK(lap.order() == 2.0);
  CHECK(std::abs(lap(x, MultiIndex{1}) - 4.0 * std::numbers::pi * std::numbers::pi) <= 1e-12);

  const ToroidalSymbol shift = parse_symbol(data("shift_bracket.json"));
  const SymbolColumn c = shift.column(MultiIndex{2});
  REQUIRE(c.size() == 1);
  CHECK(c[0].l == MultiIndex{1});
  CHECK(std::abs(c[0].value - 0.2) <= 1e-15);
  REQUIRE(shift.decay().has_value());
  CHECK(shift.decay()->order == -2.0);

  const ToroidalSymbol sum = parse_symbol(data("elliptic_sum.json"));
  CHECK(std::abs(sum(x, MultiIndex{0}) - std::cos(std::numbers::pi / 2.0)) <= 1e-15);

  const ToroidalSymbol table = parse_symbol(R"({"dimension": 1, "kind": "table",
    "entries": [{"l": 1, "k": 0, "re": 1, "im": 2}], "order_m": -3})");
  CHECK(table.column(MultiIndex{0}).at(0).value == Complex(1.0, 2.0));
  CHECK(table.order() == -3.0);

  const ToroidalSymbol mult = parse_symbol(R"({"dimension": 2, "kind": "multiplier",
    "bracket_power": -3, "scale": 2, "decay": {"order": -3, "constant": 2}})");
  const double y[] = {0.0, 0.0};
  CHECK(mult(y, MultiIndex{0, 0}) == Complex(2.0, 0.0));

  const ToroidalSymbol values = parse_symbol(R"({"dimension": 1, "kind": "multiplier",
    "values": [{"index": 3, "re": -1}]})");
  CHECK(values(x, MultiIndex{3}) == Complex(-1.0, 0.0));
  CHECK(values(x, MultiIndex{2}) == Complex(0.0, 0.0));
}

TEST_CASE("hill documents") {
  const HillInput g3 = parse_hill(data("hill_g3.json"));
  CHECK(g3.problem.nu() == 2.0);
  CHECK(g3.problem.potential().at(MultiIndex{0}) == Complex(3.0, 0.0));
  CHECK_FALSE(g3.scan.has_value());

  const HillInput scan = parse_hill(data("hill_free_scan.json"));
  REQUIRE(scan.scan.has_value());
  CHECK(scan.scan->lambda_min == -90.0);
  CHECK(scan.scan->steps == 200);
  CHECK(scan.problem.potential().empty());
}

TEST_CASE("missing files") { CHECK_THROWS_AS(read_text_file("/nonexistent/matrix.json"), Error); }
