#include "torusdet/hill.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace torusdet {

// --- HillProblem ---------------------------------------------------------------

HillProblem::HillProblem(int dim, double nu, LatticeSequence potential) : dim_(dim), nu_(nu) {
  require_dimension(dim);
  if (!(nu > dim)) throw InfeasibleOrder("nu must exceed dimension");
  for (const auto& [k, v] : potential) {
    if (k.dimension() != dim) {
      throw DimensionMismatch("potential index " + k.to_string() + " does not have dimension " +
                              std::to_string(dim));
    }
    if (v != Complex(0.0, 0.0)) g_.emplace(k, v);
  }
  std::vector<double> mags;
  for (const auto& [k, v] : g_) mags.push_back(std::abs(v));
  g_l1_ = l1_mass(mags);
  two_pi_nu_ = std::pow(2.0 * std::numbers::pi, nu);
  const double half = nu / 2.0;
  if (half == std::floor(half) && half <= 16.0) integer_half_nu_ = static_cast<int>(half);
}

int HillProblem::potential_radius() const {
  int r = 0;
  for (const auto& [k, v] : g_) r = std::max(r, k.max_abs());
  return r;
}

double HillProblem::multiplier(const MultiIndex& k) const {
  const auto ns = static_cast<double>(k.norm_squared());
  if (ns == 0.0) return 0.0;
  double power;
  if (integer_half_nu_ >= 0) {
    power = 1.0;
    for (int i = 0; i < integer_half_nu_; ++i) power *= ns;
  } else {
    power = std::pow(ns, nu_ / 2.0);
  }
  return two_pi_nu_ * power;
}

double HillProblem::damping_tail(int radius) const {
  return box_tail_power_bound(dim_, nu_, radius) / two_pi_nu_;
}

HillProblem HillProblem::shifted(Complex c) const {
  LatticeSequence g = g_;
  g[MultiIndex::zero(dim_)] += c;
  return HillProblem(dim_, nu_, std::move(g));
}

// --- HillOperator --------------------------------------------------------------

HillOperator::HillOperator(HillProblem problem) : p_(std::move(problem)) {
  const MultiIndex zero = MultiIndex::zero(p_.dimension());
  for (const auto& [l, g] : p_.potential()) {
    terms_.emplace_back(l, g);
    if (l == zero) g0_ = g;
  }
  if (terms_.empty()) return;
  // ||A||_1 = ||g||_1 * sum_k 1/damping(k): exact sum on a box plus the tail bound.
  int r0 = 1;
  while (r0 < 1024 && TruncationWindow(p_.dimension(), 2 * r0).size() <= 100000) r0 *= 2;
  NeumaierSum s;
  for_each_in_shell(p_.dimension(), -1, r0, [&](const MultiIndex& k) { s.add(1.0 / p_.damping(k)); });
  l1_bound_ = p_.potential_l1() * (s.value().real() + p_.damping_tail(r0));
}

Eigen::MatrixXcd HillOperator::section(const TruncationWindow& w) const {
  const auto m = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const MultiIndex k = w.point_at(static_cast<std::size_t>(i));
    const double d = p_.damping(k);
    for (const auto& [l, g] : terms_) {
      const MultiIndex col = k - l;
      if (w.contains(col)) f(i, static_cast<Eigen::Index>(w.index_of(col))) = g / d;
    }
  }
  return f;
}

TailSplit HillOperator::tail_split(const TruncationWindow& w) const {
  std::vector<double> wc, cw;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    for (const auto& [l, g] : terms_) {
      const MultiIndex col = k - l;
      if (!w.contains(col)) wc.push_back(std::abs(g) / p_.damping(k));
      const MultiIndex row = k + l;
      if (!w.contains(row)) cw.push_back(std::abs(g) / p_.damping(row));
    }
  }
  TailSplit s;
  s.in_to_out = l1_mass(wc);
  s.out_to_in = l1_mass(cw);
  s.outer = terms_.empty() ? 0.0 : p_.potential_l1() * p_.damping_tail(w.radius);
  s.mass = s.in_to_out + s.out_to_in + s.outer;
  return s;
}

std::optional<int> HillOperator::exact_radius() const {
  if (terms_.empty()) return 0;
  return std::nullopt;
}

int HillOperator::start_radius() const { return std::clamp(p_.potential_radius(), 1, 8); }

Complex HillOperator::diagonal(const MultiIndex& k) const { return g0_ / p_.damping(k); }

double HillOperator::diagonal_tail(int radius) const {
  if (g0_ == Complex(0.0, 0.0)) return 0.0;
  return std::abs(g0_) * p_.damping_tail(radius);
}

void HillOperator::add_diagonal(int r_lo, int r_hi, NeumaierSum& acc) const {
  if (g0_ == Complex(0.0, 0.0)) return;
  for_each_in_shell(p_.dimension(), r_lo, r_hi,
                    [&](const MultiIndex& k) { acc.add(g0_ / p_.damping(k)); });
}

// --- Matrix, determinant, existence -------------------------------------------------

HillMatrix build_hill_matrix(const HillProblem& p, const TruncationWindow& w) {
  require_dimension(w.dim);
  if (w.dim != p.dimension()) throw DimensionMismatch("window and problem dimensions differ");
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    const double d = p.damping(k);
    for (const auto& [l, g] : p.potential()) {
      const MultiIndex col = k - l;
      if (w.contains(col)) entries.push_back({k, col, g / d});
    }
  }
  const HillOperator op(p);
  const double outside = op.tail_split(w).mass;
  const double decay = p.nu() - p.dimension();
  TailModel tail = outside == 0.0 ? TailModel::exact()
                                  : TailModel::custom([outside](int) { return outside; }, decay);
  return {SparseL1Matrix(p.dimension(), entries), std::move(tail)};
}

DeterminantResult hill_determinant(const HillProblem& p, double tol, const LadderOptions& options) {
  return poincare_determinant(HillOperator(p), tol, options);
}

std::string to_string(Existence e) {
  switch (e) {
    case Existence::nontrivial_solution:
      return "nontrivial-solution";
    case Existence::only_trivial:
      return "only-trivial";
    case Existence::undecided:
      return "undecided";
  }
  return "undecided";
}

ExistenceReport existence_test(const HillProblem& p, double tol, LadderOptions options) {
  const InvertibilityReport inv =
      invertibility_test(HillOperator(p.shifted(kEquationShift)), tol, std::move(options));
  ExistenceReport r;
  r.determinant = inv.determinant;
  switch (inv.decision) {
    case Invertibility::singular:
      r.decision = Existence::nontrivial_solution;
      break;
    case Invertibility::invertible:
      r.decision = Existence::only_trivial;
      break;
    case Invertibility::undecided:
      r.decision = Existence::undecided;
      break;
  }
  return r;
}

SolutionCandidate extract_null_solution(const HillProblem& p, const TruncationWindow& w,
                                        double threshold) {
  if (w.dim != p.dimension()) throw DimensionMismatch("window and problem dimensions differ");
  const HillOperator op(p.shifted(kEquationShift));
  Eigen::MatrixXcd x = op.section(w);
  x.diagonal().array() += Complex(1.0, 0.0);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeFullV);
  const Eigen::Index m = x.rows();
  const double smallest = svd.singularValues()(m - 1);
  if (smallest > threshold) {
    throw NoNullSolution("smallest singular value " + std::to_string(smallest) +
                             " exceeds threshold " + std::to_string(threshold),
                         smallest);
  }
  Eigen::VectorXcd b = svd.matrixV().col(m - 1);
  Eigen::Index big = 0;
  b.cwiseAbs().maxCoeff(&big);
  b *= std::conj(b(big)) / std::abs(b(big));
  b /= b.norm();

  SolutionCandidate c;
  c.window = w;
  c.smallest_singular_value = smallest;
  std::vector<double> r_abs, b_abs;
  double r2 = 0.0;
  NeumaierSum mass;
  for (Eigen::Index i = 0; i < m; ++i) {
    const MultiIndex k = w.point_at(static_cast<std::size_t>(i));
    c.b.emplace(k, b(i));
    Complex r = p.multiplier(k) * b(i);
    for (const auto& [l, g] : p.potential()) {
      const MultiIndex col = k - l;
      if (w.contains(col)) r += g * b(static_cast<Eigen::Index>(w.index_of(col)));
    }
    r2 += std::norm(r);
    r_abs.push_back(std::abs(r));
    b_abs.push_back(std::abs(b(i)));
    mass.add(std::pow(k.norm(), p.nu()) * std::abs(b(i)));
  }
  c.residual = std::sqrt(r2);
  c.regularity_mass = mass.value().real();
  c.regularity_bound = (p.potential_l1() * l1_mass(b_abs) + l1_mass(r_abs)) /
                       std::pow(2.0 * std::numbers::pi, p.nu());
  return c;
}

// --- Spectral scan ---------------------------------------------------------------

std::string to_string(BracketKind k) {
  switch (k) {
    case BracketKind::sign_change:
      return "sign-change";
    case BracketKind::exact_zero:
      return "exact-zero";
    case BracketKind::dip:
      return "dip";
  }
  return "dip";
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  if (!(hi > lo)) throw InvalidArgument("lambda_max must exceed lambda_min");
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / steps;
  out.back() = hi;
  return out;
}

namespace {

class ScanEvaluator {
 public:
  ScanEvaluator(const HillProblem& p, const TruncationWindow& w, double tol)
      : p_(p), w_(w), tol_(tol), base_(HillOperator(p.shifted(kEquationShift)).section(w)) {
    inv_damping_.resize(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) {
      inv_damping_(static_cast<Eigen::Index>(i)) = 1.0 / p.damping(w.point_at(i));
    }
  }

  Eigen::MatrixXcd section(double lambda) const {
    Eigen::MatrixXcd f = base_;
    f.diagonal() += (lambda * inv_damping_).cast<Complex>();
    return f;
  }

  Complex det(double lambda) const { return finite_determinant(section(lambda)); }

  double error(double lambda, Complex det, std::size_t max_svd) const {
    const HillOperator op(p_.shifted(kEquationShift + lambda));
    return section_error_bound(section(lambda), det, op.tail_split(w_), op.l1_norm_bound(), tol_,
                               max_svd)
        .value();
  }

 private:
  const HillProblem& p_;
  TruncationWindow w_;
  double tol_;
  Eigen::MatrixXcd base_;
  Eigen::VectorXd inv_damping_;
};

struct Sample {
  double lambda;
  Complex det;
};

struct Candidate {
  double lambda;
  Complex det;
  ScanBracket bracket;
};

class RootFinder {
 public:
  RootFinder(const ScanEvaluator& ev, double tol, const ScanOptions& o) : ev_(ev), tol_(tol), o_(o) {}

  void search(const std::vector<Sample>& s, int depth) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i].det.real() == 0.0) {
        add({s[i].lambda, s[i].det, {s[i].lambda, s[i].lambda, BracketKind::exact_zero}});
      }
      if (i + 1 < n && s[i].det.real() * s[i + 1].det.real() < 0.0) {
        bisect(s[i], s[i + 1]);
      }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double here = std::abs(s[i].det);
      if (here == 0.0 || !(here < std::abs(s[i - 1].det) && here <= std::abs(s[i + 1].det))) continue;
      const double lo = s[i - 1].lambda;
      const double hi = s[i + 1].lambda;
      if (depth < o_.max_depth && hi - lo > tol_) {
        std::vector<Sample> sub;
        for (int j = 0; j <= o_.subdivisions; ++j) {
          const double lam = lo + (hi - lo) * j / o_.subdivisions;
          sub.push_back({lam, j == 0 ? s[i - 1].det : j == o_.subdivisions ? s[i + 1].det : ev_.det(lam)});
        }
        search(sub, depth + 1);
      } else {
        const bool crossing = s[i - 1].det.real() * s[i].det.real() < 0.0 ||
                              s[i].det.real() * s[i + 1].det.real() < 0.0;
        if (!crossing) golden(lo, hi);
      }
    }
  }

  std::vector<ScanBracket> brackets;
  std::vector<Candidate> candidates;

 private:
  void add(const Candidate& c) {
    brackets.push_back(c.bracket);
    candidates.push_back(c);
  }

  void bisect(Sample a, Sample b) {
    const ScanBracket bracket{a.lambda, b.lambda, BracketKind::sign_change};
    for (int it = 0; it < o_.max_iterations && b.lambda - a.lambda > tol_; ++it) {
      const double mid = 0.5 * (a.lambda + b.lambda);
      if (mid <= a.lambda || mid >= b.lambda) break;
      const Sample m{mid, ev_.det(mid)};
      if (m.det.real() == 0.0) {
        a = b = m;
        break;
      }
      if ((a.det.real() < 0.0) == (m.det.real() < 0.0)) {
        a = m;
      } else {
        b = m;
      }
    }
    add(std::abs(a.det) <= std::abs(b.det) ? Candidate{a.lambda, a.det, bracket}
                                           : Candidate{b.lambda, b.det, bracket});
  }

  void golden(double lo, double hi) {
    const ScanBracket bracket{lo, hi, BracketKind::dip};
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    Complex fc = ev_.det(c);
    Complex fd = ev_.det(d);
    for (int it = 0; it < o_.max_iterations && hi - lo > tol_; ++it) {
      if (std::abs(fc) < std::abs(fd)) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = ev_.det(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = ev_.det(d);
      }
    }
    add(std::abs(fc) < std::abs(fd) ? Candidate{c, fc, bracket} : Candidate{d, fd, bracket});
  }

  const ScanEvaluator& ev_;
  double tol_;
  const ScanOptions& o_;
};

}  // namespace

SpectralScan spectral_shift_scan(const HillProblem& p, std::span<const double> lambdas, double tol,
                                 const ScanOptions& options) {
  if (lambdas.empty()) throw InvalidArgument("empty lambda grid");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) throw InvalidArgument("lambda grid must be strictly increasing");
  }
  int radius = std::max(0, options.radius);
  while (radius > 0 && TruncationWindow(p.dimension(), radius).size() > options.max_section_size) --radius;
  const TruncationWindow w(p.dimension(), radius);
  const ScanEvaluator ev(p, w, tol);

  SpectralScan scan;
  scan.radius = radius;
  std::vector<Sample> samples;
  for (double lam : lambdas) {
    const Complex det = ev.det(lam);
    samples.push_back({lam, det});
    scan.points.push_back({lam, det, ev.error(lam, det, 0)});
  }

  RootFinder finder(ev, tol, options);
  finder.search(samples, 0);
  scan.brackets = finder.brackets;

  std::vector<Candidate> cands = finder.candidates;
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.lambda < b.lambda; });
  std::vector<Candidate> unique;
  for (const auto& c : cands) {
    const double merge = std::max(10.0 * tol, 1e-9 * (1.0 + std::abs(c.lambda)));
    if (!unique.empty() && c.lambda - unique.back().lambda <= merge) {
      if (std::abs(c.det) < std::abs(unique.back().det)) unique.back() = c;
      continue;
    }
    unique.push_back(c);
  }
  for (const auto& c : unique) {
    const double err = ev.error(c.lambda, c.det, std::numeric_limits<std::size_t>::max());
    const double abs_det = std::abs(c.det);
    if (abs_det < std::max(tol, 10.0 * err)) {
      scan.roots.push_back({c.lambda, abs_det, err, c.bracket});
    } else {
      scan.rejected.push_back({c.bracket, c.lambda, abs_det, err});
    }
  }
  return scan;
}

}  // namespace torusdet
