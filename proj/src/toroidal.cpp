#include "torusdet/toroidal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "torusdet/fourier.hpp"
#include "torusdet/numerics.hpp"
#include "torusdet/operator.hpp"

namespace torusdet {

namespace {

Complex plane_wave(std::span<const double> x, const MultiIndex& l) {
  double phase = 0.0;
  for (int i = 0; i < l.dimension(); ++i) phase += x[static_cast<std::size_t>(i)] * l[i];
  phase *= 2.0 * std::numbers::pi;
  return {std::cos(phase), std::sin(phase)};
}

void require_point(std::span<const double> x, int dim) {
  if (static_cast<int>(x.size()) != dim) throw DimensionMismatch("point dimension differs from symbol");
}

/// Largest |m(k)| over axis and diagonal points of the shell |k|_inf = r.
double shell_probe(const ToroidalSymbol::MultiplierFn& fn, int dim, int r) {
  double best = 0.0;
  for (int axis = 0; axis < dim; ++axis) {
    for (int sign : {-1, 1}) {
      MultiIndex k = MultiIndex::zero(dim);
      k[axis] = sign * r;
      best = std::max(best, std::abs(fn(k)));
    }
  }
  for (int sign : {-1, 1}) {
    MultiIndex k = MultiIndex::zero(dim);
    for (int i = 0; i < dim; ++i) k[i] = sign * r;
    best = std::max(best, std::abs(fn(k)));
  }
  return best;
}

struct Classification {
  Summability summability;
  std::string diagnostic;
};

Classification classify_leaf(const ToroidalSymbol& s) {
  const int n = s.dimension();
  if (s.support_radius()) return {Summability::exact_finite, "finitely supported"};
  if (const auto* mult = std::get_if<ToroidalSymbol::Multiplication>(&s.representation())) {
    if (mult->coefficients.empty()) return {Summability::exact_finite, "zero symbol"};
    return {Summability::not_summable,
            "multiplication symbol: each diagonal j - k = l is constant, so the matrix has infinite l1 mass"};
  }
  if (auto d = s.decay(); d && d->order < -n) {
    return {Summability::summable, "column mass <= C <k>^m with m < -n"};
  }
  if (const auto* m = std::get_if<ToroidalSymbol::Multiplier>(&s.representation())) {
    const int near = 8;
    const int far = n == 1 ? 4096 : 256;
    const double a = shell_probe(m->fn, n, near);
    const double b = shell_probe(m->fn, n, far);
    if (b > 0.0 && b >= 0.5 * a) {
      return {Summability::not_summable,
              "multiplier values do not tend to 0, so its diagonal matrix has infinite l1 mass"};
    }
  }
  if (auto m = s.order(); m && *m >= -n) {
    return {Summability::unknown, "order m >= -n does not give a summable tail"};
  }
  return {Summability::unknown, "no decay bound (order and constant) is attached"};
}

SymbolMatrix leaf_matrix(const ToroidalSymbol& s, const TruncationWindow& w) {
  const int n = s.dimension();
  std::vector<MatrixEntry> entries;
  std::vector<double> dropped;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    for (const auto& c : s.column(k)) {
      const MultiIndex j = k + c.l;
      if (w.contains(j)) {
        entries.push_back({j, k, c.value});
      } else {
        dropped.push_back(std::abs(c.value));
      }
    }
  }
  if (auto r = s.support_radius(); r && *r > w.radius) {
    for_each_in_shell(n, w.radius, *r, [&](const MultiIndex& k) {
      for (const auto& c : s.column(k)) dropped.push_back(std::abs(c.value));
    });
  }
  const Classification cls = classify_leaf(s);
  SymbolMatrix out{SparseL1Matrix(n, entries), TailModel::unbounded(), cls.summability, cls.diagnostic};
  const double edge = l1_mass(dropped);
  switch (cls.summability) {
    case Summability::exact_finite:
      out.tail = edge == 0.0 ? TailModel::exact() : TailModel::constant(edge);
      break;
    case Summability::summable: {
      const SymbolDecay d = *s.decay();
      const double u = edge + d.constant * box_tail_power_bound(n, -d.order, w.radius);
      out.tail = TailModel::custom([u](int) { return u; }, -d.order - n);
      break;
    }
    case Summability::not_summable:
    case Summability::unknown:
      break;
  }
  return out;
}

}  // namespace

// --- ToroidalSymbol ----------------------------------------------------------------

ToroidalSymbol::ToroidalSymbol(int dim, Representation rep, std::string label)
    : dim_(dim), rep_(std::move(rep)), label_(std::move(label)) {
  require_dimension(dim);
}

ToroidalSymbol ToroidalSymbol::multiplier(int dim, MultiplierFn fn, std::string label) {
  return ToroidalSymbol(dim, Multiplier{std::move(fn)}, std::move(label));
}

ToroidalSymbol ToroidalSymbol::multiplier_table(int dim, const LatticeSequence& values) {
  auto table = std::make_shared<LatticeSequence>();
  int radius = 0;
  for (const auto& [k, v] : values) {
    if (k.dimension() != dim) throw DimensionMismatch("multiplier index " + k.to_string());
    if (v == Complex(0.0, 0.0)) continue;
    table->emplace(k, v);
    radius = std::max(radius, k.max_abs());
  }
  ToroidalSymbol s = multiplier(
      dim,
      [table](const MultiIndex& k) {
        auto it = table->find(k);
        return it == table->end() ? Complex(0.0, 0.0) : it->second;
      },
      "multiplier-table");
  s.with_support_radius(radius);
  return s;
}

ToroidalSymbol ToroidalSymbol::multiplication(int dim, LatticeSequence coefficients) {
  std::erase_if(coefficients, [](const auto& kv) { return kv.second == Complex(0.0, 0.0); });
  for (const auto& [l, v] : coefficients) {
    if (l.dimension() != dim) throw DimensionMismatch("coefficient index " + l.to_string());
  }
  ToroidalSymbol s(dim, Multiplication{std::move(coefficients)}, "multiplication");
  s.with_order(0.0);
  return s;
}

ToroidalSymbol ToroidalSymbol::table(int dim, ColumnFn column, std::string label) {
  return ToroidalSymbol(dim, CoefficientTable{std::move(column)}, std::move(label));
}

ToroidalSymbol ToroidalSymbol::table(int dim,
                                     const std::map<std::pair<MultiIndex, MultiIndex>, Complex>& entries) {
  auto columns = std::make_shared<std::map<MultiIndex, SymbolColumn>>();
  int radius = 0;
  for (const auto& [key, v] : entries) {
    const auto& [l, k] = key;
    if (l.dimension() != dim || k.dimension() != dim) {
      throw DimensionMismatch("table entry (" + l.to_string() + ", " + k.to_string() + ")");
    }
    if (v == Complex(0.0, 0.0)) continue;
    (*columns)[k].push_back({l, v});
    radius = std::max(radius, k.max_abs());
  }
  ToroidalSymbol s = table(
      dim,
      [columns](const MultiIndex& k, SymbolColumn& out) {
        auto it = columns->find(k);
        if (it != columns->end()) out.insert(out.end(), it->second.begin(), it->second.end());
      },
      "table");
  s.with_support_radius(radius);
  return s;
}

ToroidalSymbol ToroidalSymbol::separable(int dim, LatticeSequence coefficients, double power, double scale) {
  std::erase_if(coefficients, [](const auto& kv) { return kv.second == Complex(0.0, 0.0); });
  double mass = 0.0;
  SymbolColumn base;
  for (const auto& [l, v] : coefficients) {
    if (l.dimension() != dim) throw DimensionMismatch("coefficient index " + l.to_string());
    base.push_back({l, v * scale});
    mass += std::abs(v);
  }
  ToroidalSymbol s = table(
      dim,
      [base, power](const MultiIndex& k, SymbolColumn& out) {
        const double w = std::pow(bracket(k), power);
        for (const auto& c : base) out.push_back({c.l, c.value * w});
      },
      "separable");
  s.with_decay(power, mass * std::abs(scale));
  return s;
}

ToroidalSymbol ToroidalSymbol::sampled(int dim, SampleFn fn, int grid_size) {
  if (grid_size < 2) throw InvalidArgument("sampled symbol needs a grid of at least 2 points");
  return ToroidalSymbol(dim, Sampled{std::move(fn), grid_size}, "sampled");
}

ToroidalSymbol ToroidalSymbol::sum(std::vector<ToroidalSymbol> terms) {
  if (terms.empty()) throw InvalidArgument("sum of no symbols");
  const int dim = terms.front().dimension();
  std::optional<SymbolDecay> decay = SymbolDecay{-HUGE_VAL, 0.0};
  std::optional<double> order = -HUGE_VAL;
  std::optional<int> radius = 0;
  for (const auto& t : terms) {
    if (t.dimension() != dim) throw DimensionMismatch("sum terms have different dimensions");
    if (decay && t.decay()) {
      decay->order = std::max(decay->order, t.decay()->order);
      decay->constant += t.decay()->constant;
    } else {
      decay.reset();
    }
    if (order && t.order()) {
      order = std::max(*order, *t.order());
    } else {
      order.reset();
    }
    if (radius && t.support_radius()) {
      radius = std::max(*radius, *t.support_radius());
    } else {
      radius.reset();
    }
  }
  ToroidalSymbol s(dim, Sum{std::move(terms)}, "sum");
  if (decay) s.with_decay(decay->order, decay->constant);
  if (order) s.with_order(*order);
  if (radius) s.with_support_radius(*radius);
  return s;
}

ToroidalSymbol& ToroidalSymbol::with_decay(double order, double constant) {
  if (!(constant >= 0.0)) throw InvalidArgument("decay constant must be nonnegative");
  decay_ = SymbolDecay{order, constant};
  return *this;
}

ToroidalSymbol& ToroidalSymbol::with_order(double order) {
  order_ = order;
  return *this;
}

ToroidalSymbol& ToroidalSymbol::with_support_radius(int r) {
  if (r < 0) throw InvalidArgument("support radius must be nonnegative");
  support_radius_ = r;
  return *this;
}

std::optional<double> ToroidalSymbol::order() const {
  if (order_) return order_;
  if (decay_) return decay_->order;
  return std::nullopt;
}

Complex ToroidalSymbol::operator()(std::span<const double> x, const MultiIndex& k) const {
  require_point(x, dim_);
  require_same_dimension(MultiIndex::zero(dim_), k);
  if (support_radius_ && k.max_abs() > *support_radius_) return {0.0, 0.0};
  return std::visit(
      [&](const auto& rep) -> Complex {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Multiplier>) {
          return rep.fn(k);
        } else if constexpr (std::is_same_v<T, Multiplication>) {
          Complex s{0.0, 0.0};
          for (const auto& [l, v] : rep.coefficients) s += v * plane_wave(x, l);
          return s;
        } else if constexpr (std::is_same_v<T, CoefficientTable>) {
          SymbolColumn col;
          rep.column(k, col);
          Complex s{0.0, 0.0};
          for (const auto& c : col) s += c.value * plane_wave(x, c.l);
          return s;
        } else if constexpr (std::is_same_v<T, Sampled>) {
          return rep.fn(x, k);
        } else {
          Complex s{0.0, 0.0};
          for (const auto& t : rep.terms) s += t(x, k);
          return s;
        }
      },
      rep_);
}

void ToroidalSymbol::append_column(const MultiIndex& k, SymbolColumn& out) const {
  require_same_dimension(MultiIndex::zero(dim_), k);
  if (support_radius_ && k.max_abs() > *support_radius_) return;
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Multiplier>) {
          const Complex v = rep.fn(k);
          if (v != Complex(0.0, 0.0)) out.push_back({MultiIndex::zero(dim_), v});
        } else if constexpr (std::is_same_v<T, Multiplication>) {
          for (const auto& [l, v] : rep.coefficients) out.push_back({l, v});
        } else if constexpr (std::is_same_v<T, CoefficientTable>) {
          rep.column(k, out);
        } else if constexpr (std::is_same_v<T, Sampled>) {
          const GridFunction g = GridFunction::sample(
              dim_, rep.grid_size, [&](std::span<const double> x) { return rep.fn(x, k); });
          const LatticeSequence c =
              fourier_coeffs(g, TruncationWindow(dim_, alias_free_radius(rep.grid_size)));
          double biggest = 0.0;
          for (const auto& [l, v] : c) biggest = std::max(biggest, std::abs(v));
          for (const auto& [l, v] : c) {
            if (std::abs(v) > 1e-14 * biggest) out.push_back({l, v});
          }
        } else {
          for (const auto& t : rep.terms) t.append_column(k, out);
        }
      },
      rep_);
}

void ToroidalSymbol::column_into(const MultiIndex& k, SymbolColumn& out) const {
  out.clear();
  append_column(k, out);
  if (out.size() > 1) {
    std::stable_sort(out.begin(), out.end(),
                     [](const SymbolCoefficient& a, const SymbolCoefficient& b) { return a.l < b.l; });
    std::size_t w = 0;
    for (std::size_t r = 1; r < out.size(); ++r) {
      if (out[r].l == out[w].l) {
        out[w].value += out[r].value;
      } else {
        out[++w] = out[r];
      }
    }
    out.resize(w + 1);
  }
  std::erase_if(out, [](const SymbolCoefficient& c) { return c.value == Complex(0.0, 0.0); });
}

SymbolColumn ToroidalSymbol::column(const MultiIndex& k) const {
  SymbolColumn out;
  column_into(k, out);
  return out;
}

ToroidalSymbol fractional_laplacian_symbol(double nu, int dim) {
  if (!(nu > 0.0)) throw InvalidOrder("fractional Laplacian needs nu > 0");
  const double scale = std::pow(2.0 * std::numbers::pi, nu);
  ToroidalSymbol s = ToroidalSymbol::multiplier(
      dim,
      [nu, scale](const MultiIndex& k) {
        const auto ns = static_cast<double>(k.norm_squared());
        if (ns == 0.0) return Complex(0.0, 0.0);
        return Complex(scale * std::pow(ns, nu / 2.0), 0.0);
      },
      "fractional-laplacian");
  s.with_order(nu);
  return s;
}

ToroidalSymbol bracket_power_symbol(int dim, double power, double scale) {
  ToroidalSymbol s = ToroidalSymbol::multiplier(
      dim, [power, scale](const MultiIndex& k) { return Complex(scale * std::pow(bracket(k), power), 0.0); },
      "bracket-power");
  s.with_decay(power, std::abs(scale));
  return s;
}

// --- Matrices ------------------------------------------------------------------------

std::string to_string(Summability s) {
  switch (s) {
    case Summability::exact_finite:
      return "exact-finite";
    case Summability::summable:
      return "summable";
    case Summability::not_summable:
      return "not-summable";
    case Summability::unknown:
      return "unknown";
  }
  return "unknown";
}

SymbolMatrix symbol_to_matrix(const ToroidalSymbol& sigma, const TruncationWindow& w) {
  if (w.dim != sigma.dimension()) throw DimensionMismatch("window and symbol dimensions differ");
  const auto* sum = std::get_if<ToroidalSymbol::Sum>(&sigma.representation());
  if (sum == nullptr || sigma.support_radius()) return leaf_matrix(sigma, w);

  std::vector<SymbolMatrix> parts;
  for (const auto& t : sum->terms) parts.push_back(symbol_to_matrix(t, w));
  std::vector<MatrixEntry> entries;
  int not_summable = 0;
  bool unknown = false;
  bool all_exact = true;
  std::string diagnostic;
  for (const auto& p : parts) {
    entries.insert(entries.end(), p.matrix.entries().begin(), p.matrix.entries().end());
    all_exact = all_exact && p.summability == Summability::exact_finite && p.tail.is_exact();
    if (p.summability == Summability::not_summable) {
      ++not_summable;
      diagnostic = p.diagnostic;
    }
    if (p.summability == Summability::unknown) unknown = true;
  }
  SymbolMatrix out{SparseL1Matrix(sigma.dimension(), entries), TailModel::unbounded(), Summability::unknown,
                   "sum term without a decay bound"};
  if (not_summable == 1 && !unknown) {
    out.summability = Summability::not_summable;
    out.diagnostic = "sum with a non-summable term: " + diagnostic;
  } else if (not_summable > 1) {
    out.diagnostic = "several non-summable terms may cancel; summability not decided";
  } else if (!unknown) {
    if (all_exact) {
      out.summability = Summability::exact_finite;
      out.tail = TailModel::exact();
      out.diagnostic = "finitely supported";
    } else {
      double u = 0.0;
      std::optional<double> p;
      for (const auto& part : parts) {
        u += part.tail.bound(w.radius);
        if (auto e = part.tail.decay_exponent()) p = p ? std::min(*p, *e) : *e;
      }
      out.summability = Summability::summable;
      out.tail = TailModel::custom([u](int) { return u; }, p);
      out.diagnostic = "sum of summable terms";
    }
  }
  return out;
}

Complex matrix_to_symbol(const SparseL1Matrix& a, std::span<const double> x, const MultiIndex& k) {
  require_point(x, a.dimension());
  Complex s{0.0, 0.0};
  for (const auto& e : a.entries()) {
    if (e.col == k) s += e.value * plane_wave(x, e.row - k);
  }
  return s;
}

TruncationWindow det_gamma_window(int dim, const LadderOptions& options) {
  int r = std::max(0, options.max_radius);
  while (r > 0 && TruncationWindow(dim, r).size() > options.max_section_size) --r;
  return TruncationWindow(dim, r);
}

DeterminantResult det_gamma(const ToroidalSymbol& sigma, double tol, const LadderOptions& options) {
  const SymbolMatrix sm = symbol_to_matrix(sigma, det_gamma_window(sigma.dimension(), options));
  if (sm.summability == Summability::not_summable) throw NotSummable(sm.diagnostic);
  if (sm.summability == Summability::unknown) throw UnsupportedRepresentation(sm.diagnostic);
  return poincare_determinant(sm.matrix, sm.tail, tol, options);
}

}  // namespace torusdet
