#include "doctest.h"
#include "oracles.hpp"
#include "torusdet/diagnostics.hpp"

using namespace torusdet;

namespace {

ToroidalSymbol shifted_bracket() {
  // e^{2 pi i x} <k>^-2
  return ToroidalSymbol::separable(1, {{MultiIndex{1}, {1.0, 0.0}}}, -2.0);
}

ToroidalSymbol elliptic_sum() {
  // (2 pi)^2 |k|^2 + cos(2 pi x)
  ToroidalSymbol s = ToroidalSymbol::sum(
      {fractional_laplacian_symbol(2.0, 1),
       ToroidalSymbol::multiplication(1, {{MultiIndex{1}, {0.5, 0.0}}, {MultiIndex{-1}, {0.5, 0.0}}})});
  s.with_order(2.0);
  return s;
}

}  // namespace

TEST_CASE("ellipticity of a Laplacian plus a bounded potential") {
  const EllipticityReport r = strong_ellipticity_check(elliptic_sum(), 2.0, TruncationWindow(1, 64), 64);
  CHECK(r.passed);
  CHECK(r.n0 == 1);
  // the minimum sits at |k| = 1, cos = -1
  CHECK(r.C0 == doctest::Approx((oracle::kFourPiSq - 1.0) / 2.0).epsilon(1e-12));
  CHECK(std::abs(r.worst_k[0]) == 1);
  REQUIRE(r.worst_x.size() == 1);
  CHECK(r.worst_x[0] == 0.5);
  CHECK(r.violations > 0);
}

TEST_CASE("ellipticity failures") {
  const ToroidalSymbol neg = ToroidalSymbol::multiplier(
      1, [](const MultiIndex& k) { return Complex(-double(k.norm_squared()), 0.0); });
  const EllipticityReport r = strong_ellipticity_check(neg, 2.0, TruncationWindow(1, 64), 16);
  CHECK_FALSE(r.passed);
  CHECK(r.n0 == 65);
  CHECK(r.C0 == 0.0);

  // elliptic only for |k| >= 40: n0 beyond N/2
  const ToroidalSymbol late = ToroidalSymbol::multiplier(
      1, [](const MultiIndex& k) { return Complex(double(k.norm_squared()) - 1600.0 + 0.5, 0.0); });
  const EllipticityReport l = strong_ellipticity_check(late, 2.0, TruncationWindow(1, 64), 16);
  CHECK(l.n0 == 40);
  CHECK_FALSE(l.passed);
}

TEST_CASE("ellipticity of a bracket power in two dimensions") {
  const EllipticityReport r = strong_ellipticity_check(bracket_power_symbol(2, 2.0), 2.0, TruncationWindow(2, 16), 8);
  CHECK(r.passed);
  CHECK(r.n0 == 0);
  CHECK(r.C0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.violations == 0);
}

TEST_CASE("order estimates of bracket powers") {
  for (double m : {-2.0, 0.0, 1.5, 2.0}) {
    const OrderDiagnostic d =
        symbol_order_diagnostic(bracket_power_symbol(1, m), MultiIndex{0}, TruncationWindow(1, 64), 16);
    CHECK(d.order_estimate == doctest::Approx(m).epsilon(1e-9));
    REQUIRE(d.fits.size() == 1);
    CHECK(d.fits[0].constant == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("differences lower the order") {
  const ToroidalSymbol s = ToroidalSymbol::multiplier(
      1, [](const MultiIndex& k) { return Complex(std::pow(std::abs(double(k[0])), 1.5), 0.0); });
  const OrderDiagnostic d = symbol_order_diagnostic(s, MultiIndex{2}, TruncationWindow(1, 64), 16);
  REQUIRE(d.fits.size() == 3);
  CHECK(d.fits[1].alpha == MultiIndex{1});
  CHECK(d.fits[1].exponent == doctest::Approx(0.5).epsilon(0.05));
  CHECK(d.fits[2].exponent == doctest::Approx(-0.5).epsilon(0.1));
  for (const auto& f : d.fits) CHECK(f.implied_order == doctest::Approx(1.5).epsilon(0.05));

  const OrderDiagnostic c = symbol_order_diagnostic(
      ToroidalSymbol::multiplier(1, [](const MultiIndex&) { return Complex(2.0, 0.0); }), MultiIndex{1},
      TruncationWindow(1, 32), 16);
  CHECK(c.order_estimate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.fits[1].vanishing);
  CHECK_THROWS_AS(symbol_order_diagnostic(bracket_power_symbol(1, 1.0), MultiIndex{0}, TruncationWindow(1, 1), 16),
                  InvalidArgument);
}

TEST_CASE("truncated norms") {
  const ToroidalSymbol s = bracket_power_symbol(1, -2.0);
  const NormStep a = truncated_norm(s, TruncationWindow(1, 10));
  double expect = 0.0;
  for (int k = -10; k <= 10; ++k) expect += 1.0 / (1.0 + k * k);
  CHECK(a.norm == doctest::Approx(expect).epsilon(1e-14));
  CHECK(a.upper >= oracle::pi_coth_pi());

  // the edge column of a shifted symbol is dropped and charged to upper
  const NormStep b = truncated_norm(shifted_bracket(), TruncationWindow(1, 3));
  double inside = 0.0;
  for (int k = -3; k < 3; ++k) inside += 1.0 / (1.0 + k * k);
  CHECK(b.norm == doctest::Approx(inside).epsilon(1e-14));
  CHECK(b.upper - b.norm >= 0.1);
}

TEST_CASE("l1 membership of a decaying shifted symbol") {
  L1MembershipOptions o;
  o.tol = 1e-6;
  const L1Membership m = l1_membership_check(shifted_bracket(), o);
  CHECK(m.in_l1);
  CHECK(m.order_source == "metadata");
  CHECK(m.order == -2.0);
  CHECK_FALSE(m.boundary_warning);
  REQUIRE_FALSE(m.ladder.empty());
  CHECK(std::abs(m.ladder.back().norm - oracle::pi_coth_pi()) <= 1e-6);
  CHECK(m.ladder.back().upper >= oracle::pi_coth_pi());
  CHECK(std::abs(m.limit_estimate - oracle::pi_coth_pi()) <= 1e-9);
  for (std::size_t i = 1; i < m.ladder.size(); ++i) CHECK(m.ladder[i].norm >= m.ladder[i - 1].norm);
}

TEST_CASE("l1 membership rejections") {
  const L1Membership c =
      l1_membership_check(ToroidalSymbol::multiplier(1, [](const MultiIndex&) { return Complex(1.0, 0.0); }));
  CHECK_FALSE(c.in_l1);
  CHECK(c.order_source == "estimated");
  CHECK(c.order == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(c.ladder.back().radius <= 64);

  const L1Membership edge = l1_membership_check(bracket_power_symbol(1, -1.0));
  CHECK_FALSE(edge.in_l1);
  CHECK(edge.boundary_warning);

  const L1Membership finite = l1_membership_check(
      ToroidalSymbol::table(1, {{{MultiIndex{1}, MultiIndex{0}}, {3.0, 4.0}}, {{MultiIndex{0}, MultiIndex{2}}, {1.0, 0.0}}}));
  CHECK(finite.in_l1);
  CHECK(finite.order_source == "finite");
  CHECK(finite.ladder.back().norm == doctest::Approx(6.0));
}
