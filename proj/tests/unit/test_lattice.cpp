#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "torusdet/lattice.hpp"

using namespace torusdet;

namespace {

std::int64_t poly(const MultiIndex& k, const std::vector<int>& c) {
  // integer polynomial in k_1 (and k_2) with small coefficients
  std::int64_t x = k[0];
  std::int64_t y = k.dimension() > 1 ? k[1] : 0;
  return c[0] + c[1] * x + c[2] * x * x * x + c[3] * y * y + c[4] * x * y * y * x + c[5] * x * x * x * x * x;
}

/// Delta^alpha by repeated one-step differences along each axis.
std::int64_t iterated_difference(const std::function<std::int64_t(const MultiIndex&)>& phi, MultiIndex alpha,
                                 const MultiIndex& k) {
  for (int i = 0; i < alpha.dimension(); ++i) {
    if (alpha[i] > 0) {
      --alpha[i];
      const MultiIndex e = MultiIndex::unit(k.dimension(), i);
      return iterated_difference(phi, alpha, k + e) - iterated_difference(phi, alpha, k);
    }
  }
  return phi(k);
}

}  // namespace

TEST_CASE("multi-index arithmetic and norms") {
  const MultiIndex a{3, 4};
  const MultiIndex b{-1, 2};
  CHECK(a + b == MultiIndex{2, 6});
  CHECK(a - b == MultiIndex{4, 2});
  CHECK(-b == MultiIndex{1, -2});
  CHECK(a.norm_squared() == 25);
  CHECK(a.norm() == 5.0);
  CHECK(b.max_abs() == 2);
  CHECK(a.total() == 7);
  CHECK(MultiIndex::zero(3) == MultiIndex{0, 0, 0});
  CHECK(MultiIndex::unit(2, 1) == MultiIndex{0, 1});
  CHECK(a.to_string() == "(3,4)");
  CHECK_THROWS_AS(a + MultiIndex{1}, DimensionMismatch);
  CHECK(MultiIndex{-1, 5} < MultiIndex{0, -5});
  CHECK_THROWS_AS(MultiIndex::zero(5), InvalidArgument);
}

TEST_CASE("bracket values") {
  CHECK(bracket(MultiIndex{0}) == 1.0);
  CHECK(bracket(MultiIndex{0, 0, 0}) == 1.0);
  CHECK(bracket(MultiIndex{3, 4}) == doctest::Approx(5.0990195).epsilon(1e-8));
  CHECK(bracket(MultiIndex{1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("bracket is at least one and even") {
  std::mt19937 rng(11);
  for (int t = 0; t < 500; ++t) {
    const int dim = 1 + t % 4;
    const MultiIndex k = oracle::random_index(rng, dim, 1000);
    CHECK(bracket(k) >= 1.0);
    CHECK(bracket(k) == bracket(-k));
  }
}

TEST_CASE("forward differences of simple sequences") {
  auto linear = [](const MultiIndex& k) { return Complex(k[0], 0.0); };
  auto square = [](const MultiIndex& k) { return Complex(double(k[0]) * k[0], 0.0); };
  auto bilinear = [](const MultiIndex& k) { return Complex(double(k[0]) * k[1], 0.0); };
  for (int k = -5; k <= 5; ++k) {
    CHECK(forward_difference(linear, MultiIndex{1}, MultiIndex{k}) == Complex(1.0, 0.0));
    CHECK(forward_difference(square, MultiIndex{2}, MultiIndex{k}) == Complex(2.0, 0.0));
    CHECK(forward_difference(bilinear, MultiIndex{1, 1}, MultiIndex{k, 2 * k}) == Complex(1.0, 0.0));
  }
  CHECK(forward_difference(square, MultiIndex{0}, MultiIndex{3}) == Complex(9.0, 0.0));
  CHECK_THROWS_AS(forward_difference(square, MultiIndex{-1}, MultiIndex{0}), InvalidOrder);
}

TEST_CASE("forward difference is linear") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
    const Complex s(u(rng), u(rng));
    auto f = [&](const MultiIndex& k) { return Complex(std::sin(a1 * k[0] + a2 * k[1]), std::cos(a2 * k[0])); };
    auto g = [&](const MultiIndex& k) { return Complex(b1 * k[0] * k[1], std::exp(b2 * k[1] / 10.0)); };
    auto h = [&](const MultiIndex& k) { return f(k) + s * g(k); };
    const MultiIndex alpha = oracle::random_index(rng, 2, 2);
    const MultiIndex a{std::abs(alpha[0]), std::abs(alpha[1])};
    const MultiIndex k = oracle::random_index(rng, 2, 20);
    const Complex lhs = forward_difference(h, a, k);
    const Complex rhs = forward_difference(f, a, k) + s * forward_difference(g, a, k);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("forward difference annihilates low-degree polynomials") {
  // degree 2 in k_1 and 1 in k_2
  auto p = [](const MultiIndex& k) {
    return Complex(3.0 * k[0] * k[0] - 7.0 * k[0] * k[1] + 2.0 * k[1] - 11.0, 0.0);
  };
  for (int x = -4; x <= 4; ++x) {
    for (int y = -4; y <= 4; ++y) {
      const MultiIndex k{x, y};
      CHECK(forward_difference(p, MultiIndex{3, 0}, k) == Complex(0.0, 0.0));
      CHECK(forward_difference(p, MultiIndex{0, 2}, k) == Complex(0.0, 0.0));
      CHECK(forward_difference(p, MultiIndex{2, 1}, k) == Complex(0.0, 0.0));
    }
  }
}

TEST_CASE("binomial-sum difference equals iterated one-step differences") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int dim = 1; dim <= 2; ++dim) {
    for (int t = 0; t < 40; ++t) {
      std::vector<int> c(6);
      for (auto& v : c) v = coef(rng);
      auto phi = [&](const MultiIndex& k) { return poly(k, c); };
      auto phic = [&](const MultiIndex& k) { return Complex(static_cast<double>(poly(k, c)), 0.0); };
      for (int order = 0; order <= 6; ++order) {
        MultiIndex alpha = MultiIndex::zero(dim);
        alpha[0] = dim == 1 ? order : order / 2;
        if (dim == 2) alpha[1] = order - alpha[0];
        const MultiIndex k = oracle::random_index(rng, dim, 6);
        const Complex lhs = forward_difference(phic, alpha, k);
        CHECK(lhs == Complex(static_cast<double>(iterated_difference(phi, alpha, k)), 0.0));
      }
    }
  }
}

TEST_CASE("window enumeration") {
  CHECK(enumerate_window(TruncationWindow(2, 0)) == std::vector<MultiIndex>{MultiIndex{0, 0}});
  CHECK(enumerate_window(TruncationWindow(1, 1)) ==
        std::vector<MultiIndex>{MultiIndex{-1}, MultiIndex{0}, MultiIndex{1}});
  const auto w2 = enumerate_window(TruncationWindow(2, 1));
  REQUIRE(w2.size() == 9);
  CHECK(w2.front() == MultiIndex{-1, -1});
  CHECK(w2.back() == MultiIndex{1, 1});
  CHECK(std::is_sorted(w2.begin(), w2.end()));
}

TEST_CASE("windows are nested and indexable") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int r = 0; r < 4; ++r) {
      const TruncationWindow w(dim, r);
      const TruncationWindow bigger(dim, r + 1);
      const auto pts = enumerate_window(w);
      CHECK(pts.size() == w.size());
      std::set<MultiIndex> outer;
      for (const auto& k : enumerate_window(bigger)) outer.insert(k);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(outer.contains(pts[i]));
        CHECK(w.index_of(pts[i]) == i);
        CHECK(w.point_at(i) == pts[i]);
        CHECK(w.contains(pts[i]));
      }
    }
  }
  CHECK_FALSE(TruncationWindow(1, 2).contains(MultiIndex{3}));
  CHECK_THROWS_AS(TruncationWindow(1, -1), InvalidArgument);
}

TEST_CASE("lp norms") {
  LatticeSequence x{{MultiIndex{0}, Complex(3.0, 0.0)}, {MultiIndex{2}, Complex(0.0, 4.0)}};
  CHECK(lp_norm(x, 1.0) == 7.0);
  CHECK(lp_norm(x, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm(x, HUGE_VAL) == 4.0);
}
