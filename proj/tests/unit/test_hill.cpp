#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "torusdet/hill.hpp"

using namespace torusdet;

namespace {

HillProblem constant(double g0) { return HillProblem(1, 2.0, {{MultiIndex{0}, {g0, 0.0}}}); }

/// Q = 2 q cos(2 pi x) + g0
HillProblem mathieu(double q, double g0 = 0.0) {
  LatticeSequence g{{MultiIndex{-1}, {q, 0.0}}, {MultiIndex{1}, {q, 0.0}}};
  if (g0 != 0.0) g[MultiIndex{0}] = {g0, 0.0};
  return HillProblem(1, 2.0, g);
}

LadderOptions lenient() {
  LadderOptions o;
  o.require_convergence = false;
  return o;
}

}  // namespace

TEST_CASE("problem construction") {
  CHECK_THROWS_AS(HillProblem(1, 1.0, {}), InfeasibleOrder);
  CHECK_THROWS_AS(HillProblem(2, 2.0, {}), InfeasibleOrder);
  CHECK_THROWS_AS(HillProblem(1, 2.0, {{MultiIndex{0, 0}, {1.0, 0.0}}}), DimensionMismatch);
  const HillProblem p(1, 2.0, {{MultiIndex{0}, {0.0, 0.0}}, {MultiIndex{2}, {1.0, -1.0}}});
  CHECK(p.potential().size() == 1);
  CHECK(p.potential_radius() == 2);
  CHECK(p.potential_l1() == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.multiplier(MultiIndex{1}) == doctest::Approx(oracle::kFourPiSq));
  CHECK(p.damping(MultiIndex{0}) == 1.0);
  const HillProblem s = p.shifted({-1.0, 0.0});
  CHECK(s.potential().at(MultiIndex{0}) == Complex(-1.0, 0.0));
}

TEST_CASE("damping tail bounds the lattice sum") {
  for (int dim = 1; dim <= 2; ++dim) {
    const HillProblem p(dim, dim + 1.5, {});
    for (int r : {1, 4, 10}) {
      double s = 0.0;
      for_each_in_shell(dim, r, 300, [&](const MultiIndex& k) { s += 1.0 / p.damping(k); });
      CHECK(s <= p.damping_tail(r));
    }
  }
}

TEST_CASE("hill matrix entries") {
  const HillMatrix h = build_hill_matrix(mathieu(0.5, 2.0), TruncationWindow(1, 2));
  CHECK(h.matrix.at(MultiIndex{0}, MultiIndex{0}) == Complex(2.0, 0.0));
  CHECK(std::abs(h.matrix.at(MultiIndex{1}, MultiIndex{0}) - 0.5 / (oracle::kFourPiSq + 1.0)) <= 1e-16);
  CHECK(std::abs(h.matrix.at(MultiIndex{-2}, MultiIndex{-1}) - 0.5 / (16.0 * oracle::kPi * oracle::kPi + 1.0)) <=
        1e-16);
  CHECK(h.matrix.at(MultiIndex{2}, MultiIndex{0}) == Complex(0.0, 0.0));
  // 5 diagonal + 8 off-diagonal entries inside the window
  CHECK(h.matrix.nnz() == 13);
  CHECK(h.tail.bound(2) > 0.0);
}

TEST_CASE("l1 bound of a constant potential") {
  const HillOperator op(constant(3.0));
  const double exact = 3.0 * oracle::coth_sum();
  CHECK(op.l1_norm_bound() >= exact);
  CHECK(op.l1_norm_bound() <= exact * (1.0 + 1e-3));
  CHECK(op.decay_exponent() == 1.0);
}

TEST_CASE("literal determinant of a constant potential") {
  const DeterminantResult r = hill_determinant(constant(3.0), 1e-6, lenient());
  CHECK(std::abs(r.value - oracle::sinh_product(3.0)) <= 1e-6);
  CHECK(std::abs(r.value - oracle::sinh_product(3.0)) <= r.certified_error);
  for (const auto& s : r.ladder) {
    double p = 1.0;
    for (int k = -s.radius; k <= s.radius; ++k) p *= 1.0 + 3.0 / (oracle::kFourPiSq * k * k + 1.0);
    CHECK(std::abs(s.value - p) <= 1e-12 * p);
  }
}

TEST_CASE("real even potentials give real determinants") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    LatticeSequence g{{MultiIndex{0}, {u(rng), 0.0}}};
    for (int k = 1; k <= 3; ++k) {
      const double v = u(rng);
      g[MultiIndex{k}] = {v, 0.0};
      g[MultiIndex{-k}] = {v, 0.0};
    }
    const DeterminantResult r = hill_determinant(HillProblem(1, 2.0, g), 1e-6, lenient());
    CHECK(std::abs(r.value.imag()) <= 1e-12 * std::max(1.0, std::abs(r.value)));
  }
}

TEST_CASE("existence for constant potentials") {
  const ExistenceReport pos = existence_test(constant(3.0), 1e-8);
  CHECK(pos.decision == Existence::only_trivial);
  // equation determinant: prod (4 pi^2 k^2 + 3) / (4 pi^2 k^2 + 1)
  CHECK(std::abs(pos.determinant.value - oracle::sinh_product(2.0)) <= 1e-6);

  const ExistenceReport res = existence_test(constant(-oracle::kFourPiSq), 1e-8);
  CHECK(res.decision == Existence::nontrivial_solution);
  CHECK(std::abs(res.determinant.value) <= 1e-8);

  // Q = 0 keeps the constants as solutions
  const ExistenceReport zero = existence_test(HillProblem(1, 2.0, {}), 1e-8);
  CHECK(zero.decision == Existence::nontrivial_solution);
  CHECK(to_string(Existence::only_trivial) == "only-trivial");
}

TEST_CASE("null solution of a resonant constant potential") {
  const SolutionCandidate c = extract_null_solution(constant(-oracle::kFourPiSq), TruncationWindow(1, 8));
  CHECK(c.residual <= 1e-12);
  CHECK(c.smallest_singular_value <= 1e-12);
  double mass = 0.0;
  for (const auto& [k, v] : c.b) {
    if (std::abs(k[0]) == 1) mass += std::norm(v);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.regularity_mass <= c.regularity_bound * (1.0 + 1e-12));
  CHECK_THROWS_AS(extract_null_solution(constant(3.0), TruncationWindow(1, 8)), NoNullSolution);
}

TEST_CASE("null solution at a Mathieu eigenvalue") {
  const double q = 1.0;
  const int radius = 8;
  const double mu = oracle::hill_eigenvalues(q, radius).front();
  const SolutionCandidate c = extract_null_solution(mathieu(q, -mu), TruncationWindow(1, radius));
  CHECK(c.residual <= 1e-9);
  // the ground state is even
  for (int k = 1; k <= radius; ++k) {
    CHECK(std::abs(c.b.at(MultiIndex{k}) - c.b.at(MultiIndex{-k})) <= 1e-9);
  }
}

TEST_CASE("residual does not grow with the window") {
  const double q = 2.0;
  const double mu = oracle::hill_eigenvalues(q, 20).front();
  double previous = HUGE_VAL;
  for (int r : {2, 4, 8, 16}) {
    const SolutionCandidate c = extract_null_solution(mathieu(q, -mu), TruncationWindow(1, r), 1.0);
    CHECK(c.residual <= previous * (1.0 + 1e-9) + 1e-12);
    previous = c.residual;
  }
  CHECK(previous <= 1e-9);
}

TEST_CASE("scan of the free problem") {
  const std::vector<double> grid = linspace(-90.0, 10.0, 200);
  REQUIRE(grid.size() == 201);
  const SpectralScan s = spectral_shift_scan(HillProblem(1, 2.0, {}), grid, 1e-8);
  REQUIRE(s.roots.size() == 2);
  CHECK(s.roots[0].lambda == doctest::Approx(-oracle::kFourPiSq).epsilon(1e-9));
  CHECK(std::abs(s.roots[1].lambda) <= 1e-12);
}

TEST_CASE("scan roots match a dense eigenvalue solver") {
  const double q = 1.0;
  ScanOptions o;
  o.radius = 32;
  const SpectralScan s = spectral_shift_scan(mathieu(q), linspace(-170.0, 10.0, 360), 1e-8, o);
  std::vector<double> expected;
  for (double mu : oracle::hill_eigenvalues(q, o.radius)) {
    if (-mu >= -170.0 && -mu <= 10.0) expected.push_back(-mu);
  }
  std::sort(expected.begin(), expected.end());
  // pairs split by less than the scan can resolve count once
  expected.erase(std::unique(expected.begin(), expected.end(), [](double a, double b) { return b - a < 1e-4; }),
                 expected.end());
  REQUIRE(s.roots.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::abs(s.roots[i].lambda - expected[i]) <= 1e-5 * std::max(1.0, std::abs(expected[i])));
  }
}

TEST_CASE("weak potential moves the zero root only slightly") {
  const SpectralScan s = spectral_shift_scan(mathieu(0.01), linspace(-1.0, 1.0, 20), 1e-8);
  REQUIRE(s.roots.size() == 1);
  CHECK(std::abs(s.roots[0].lambda) <= 1e-3);
}

TEST_CASE("scan argument checks") {
  CHECK_THROWS_AS(spectral_shift_scan(HillProblem(1, 2.0, {}), std::vector<double>{}, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), InvalidArgument);
}
