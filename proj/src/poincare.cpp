#include "torusdet/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace torusdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_tolerance(double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
}

std::vector<int> ladder_radii(int dim, int start, const LadderOptions& o) {
  if (o.max_radius < 0) throw InvalidArgument("max_radius must be nonnegative");
  int cap = o.max_radius;
  while (cap > 0 && TruncationWindow(dim, cap).size() > o.max_section_size) --cap;
  int r = std::clamp(start, 0, cap);
  std::vector<int> radii{r};
  while (true) {
    const int next = r == 0 ? 1 : 2 * r;
    if (next > cap) break;
    r = next;
    radii.push_back(r);
  }
  if (radii.back() < cap) radii.push_back(cap);
  return radii;
}

double svd_coupling_delta(const Eigen::MatrixXcd& f, double s) {
  Eigen::MatrixXcd x = f;
  x.diagonal().array() += Complex(1.0, 0.0);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  const auto m = static_cast<std::size_t>(sv.size());
  std::vector<double> log_prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    log_prefix[i + 1] = log_prefix[i] + std::log(sv[static_cast<Eigen::Index>(i)]);
  }
  const double log_s = std::log(s);
  double delta = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double log_term =
        log_prefix[m - k] + static_cast<double>(k) * log_s - std::lgamma(static_cast<double>(k) + 1.0);
    delta += std::exp(log_term);
  }
  return delta;
}

std::string ladder_summary(const std::vector<LadderStep>& ladder) {
  std::ostringstream os;
  os.precision(3);
  for (const auto& s : ladder) os << " N=" << s.radius << " bound=" << s.bound << ';';
  return os.str();
}

Complex fit_estimate(std::span<const LadderStep> ladder, int level, std::size_t j, double p) {
  const auto rows = static_cast<Eigen::Index>(level + 1);
  Eigen::MatrixXcd m(rows, rows);
  Eigen::VectorXcd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& step = ladder[j - static_cast<std::size_t>(level) + static_cast<std::size_t>(r)];
    const double n = static_cast<double>(step.radius);
    m(r, 0) = 1.0;
    for (Eigen::Index t = 1; t < rows; ++t) m(r, t) = std::pow(n, -(p + static_cast<double>(t - 1)));
    rhs(r) = step.value;
  }
  return m.fullPivLu().solve(rhs)(0);
}

}  // namespace

double entrywise_l1(const Eigen::MatrixXcd& f) { return f.cwiseAbs().sum(); }

SectionBound section_error_bound(const Eigen::MatrixXcd& f, Complex det, const TailSplit& split,
                                 double l1_norm_bound, double tol, std::size_t max_svd_size) {
  const double m = static_cast<double>(f.rows());
  const double f_l1 = entrywise_l1(f);
  // Allowance for the LU rounding, treated as one more perturbation of X.
  const double s_round = m * std::numeric_limits<double>::epsilon() * (m + f_l1);
  const double cheap_scale = std::exp(f_l1);

  SectionBound b;
  const double round_cheap = cheap_scale * std::expm1(s_round);
  if (split.mass == 0.0) {
    b.lipschitz = round_cheap;
  } else {
    b.lipschitz = std::isfinite(l1_norm_bound)
                      ? split.mass * std::exp(l1_norm_bound + 1.0) + round_cheap
                      : kInf;
  }
  b.block = kInf;
  if (split.outer < 1.0) {
    const double s = split.in_to_out * split.out_to_in / (1.0 - split.outer) + s_round;
    const double abs_det = std::abs(det);
    double delta = s == 0.0 ? 0.0 : cheap_scale * std::expm1(s);
    auto combine = [&](double d) { return std::expm1(split.outer) * (abs_det + d) + d; };
    double block = combine(delta);
    // The singular values only sharpen delta; skip them when the outer term alone exceeds tol.
    if (block > tol && s > 0.0 && std::expm1(split.outer) * abs_det <= tol &&
        static_cast<std::size_t>(f.rows()) <= max_svd_size) {
      delta = std::min(delta, svd_coupling_delta(f, s));
      block = combine(delta);
    }
    b.block = block;
  }
  return b;
}

Extrapolation richardson(std::span<const LadderStep> ladder, double p) {
  Extrapolation best;
  if (ladder.empty()) return best;
  const std::size_t last = ladder.size() - 1;
  best.value = ladder[last].value;
  if (ladder.size() < 2) return best;
  best.spread = std::abs(ladder[last].value - ladder[last - 1].value);
  constexpr int kMaxLevel = 6;
  for (int level = 1; level <= kMaxLevel && static_cast<std::size_t>(level) + 1 <= last; ++level) {
    const Complex now = fit_estimate(ladder, level, last, p);
    const Complex before = fit_estimate(ladder, level, last - 1, p);
    const double spread = std::abs(now - before);
    if (std::isfinite(spread) && spread < best.spread) {
      best = {now, level, spread};
    }
  }
  return best;
}

DeterminantResult poincare_determinant(const L1Operator& a, double tol, const LadderOptions& options) {
  require_tolerance(tol);
  const int dim = a.dimension();
  DeterminantResult result;

  if (auto exact = a.exact_radius(); exact && TruncationWindow(dim, *exact).size() <= options.max_section_size) {
    const TruncationWindow w(dim, *exact);
    result.value = finite_determinant(a.section(w));
    result.ladder.push_back({*exact, result.value, 0.0});
    result.certified_error = 0.0;
    result.converged = true;
    return result;
  }

  const double l1 = a.l1_norm_bound();
  for (int r : ladder_radii(dim, options.start_radius.value_or(a.start_radius()), options)) {
    const TruncationWindow w(dim, r);
    const Eigen::MatrixXcd f = a.section(w);
    const Complex det = finite_determinant(f);
    const double bound =
        section_error_bound(f, det, a.tail_split(w), l1, tol, options.max_svd_size).value();
    result.ladder.push_back({r, det, bound});
    if (bound <= tol) {
      result.converged = true;
      break;
    }
  }

  const LadderStep& last = result.ladder.back();
  result.value = last.value;
  result.certified_error = last.bound;
  if (!result.converged && options.extrapolate && result.ladder.size() >= 3) {
    if (auto p = a.decay_exponent(); p && *p > 0.0) {
      const Extrapolation e = richardson(result.ladder, *p);
      if (e.level > 0) {
        result.value = e.value;
        result.extrapolation_level = e.level;
        result.certified_error = last.bound + std::abs(e.value - last.value);
      }
    }
  }
  if (!result.converged && options.require_convergence) {
    throw NonConvergence("determinant ladder did not reach tolerance by radius " +
                             std::to_string(last.radius) + ":" + ladder_summary(result.ladder),
                         result.ladder, result.value, result.certified_error);
  }
  return result;
}

DeterminantResult poincare_determinant(const SparseL1Matrix& a, const TailModel& tail, double tol,
                                       const LadderOptions& options) {
  return poincare_determinant(MatrixOperator(a, tail), tol, options);
}

TraceResult poincare_trace(const L1Operator& a, double tol, const TraceOptions& options) {
  require_tolerance(tol);
  const int dim = a.dimension();
  TraceResult result;
  NeumaierSum acc;

  if (auto exact = a.exact_radius()) {
    a.add_diagonal(-1, *exact, acc);
    result.value = acc.value();
    result.ladder.push_back({*exact, result.value, 0.0});
    result.converged = true;
    return result;
  }

  int done = -1;
  int r = std::max(1, a.start_radius());
  while (true) {
    a.add_diagonal(done, r, acc);
    done = r;
    const double bound = a.diagonal_tail(r);
    result.ladder.push_back({r, acc.value(), bound});
    if (bound <= tol) {
      result.converged = true;
      break;
    }
    const int next = 2 * r;
    if (next > options.max_radius || TruncationWindow(dim, next).size() > options.max_points) break;
    r = next;
  }
  result.value = result.ladder.back().value;
  result.certified_error = result.ladder.back().bound;
  if (!result.converged && options.require_convergence) {
    throw NonConvergence("trace ladder did not reach tolerance by radius " + std::to_string(r) + ":" +
                             ladder_summary(result.ladder),
                         result.ladder, result.value, result.certified_error);
  }
  return result;
}

TraceResult poincare_trace(const SparseL1Matrix& a, const TailModel& tail, double tol,
                           const TraceOptions& options) {
  return poincare_trace(MatrixOperator(a, tail), tol, options);
}

std::string to_string(Invertibility d) {
  switch (d) {
    case Invertibility::invertible:
      return "invertible";
    case Invertibility::singular:
      return "singular";
    case Invertibility::undecided:
      return "undecided";
  }
  return "undecided";
}

Invertibility classify_determinant(const DeterminantResult& det, double tol) {
  const double mag = std::abs(det.value);
  const double err = det.certified_error;
  if (!std::isfinite(err)) return Invertibility::undecided;
  if (mag > err) return Invertibility::invertible;
  if (mag + err < tol) return Invertibility::singular;
  return Invertibility::undecided;
}

InvertibilityReport invertibility_test(const L1Operator& a, double tol, LadderOptions options) {
  options.require_convergence = false;
  InvertibilityReport report;
  report.determinant = poincare_determinant(a, tol, options);
  report.decision = classify_determinant(report.determinant, tol);
  return report;
}

InvertibilityReport invertibility_test(const SparseL1Matrix& a, const TailModel& tail, double tol,
                                       LadderOptions options) {
  return invertibility_test(MatrixOperator(a, tail), tol, options);
}

}  // namespace torusdet
