#include "torusdet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "torusdet/numerics.hpp"
#include "torusdet/operator.hpp"

namespace torusdet {

namespace {

constexpr double kEvaluationBudget = 4e6;

/// Points per axis of the x grid, capped so that |x samples| * |w| stays near the budget.
int x_samples(int dim, int x_grid, std::size_t k_points) {
  if (x_grid < 1) throw InvalidArgument("x grid must have at least one point");
  const double per_k = std::max(1.0, kEvaluationBudget / static_cast<double>(std::max<std::size_t>(k_points, 1)));
  int s = static_cast<int>(std::floor(std::pow(per_k, 1.0 / dim)));
  return std::clamp(s, 1, x_grid);
}

/// All points of the uniform grid with s points per axis.
std::vector<std::vector<double>> x_points(int dim, int s) {
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(s);
  std::vector<std::vector<double>> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    std::size_t r = i;
    for (int a = dim - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = static_cast<double>(r % static_cast<std::size_t>(s)) / s;
      r /= static_cast<std::size_t>(s);
    }
    out.push_back(std::move(x));
  }
  return out;
}

/// Slope and intercept of the least-squares line through (t, y).
std::pair<double, double> fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  const auto n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
  }
  const double mt = st / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  const double slope = den > 0.0 ? num / den : 0.0;
  return {slope, my - slope * mt};
}

std::vector<MultiIndex> alpha_box(const MultiIndex& alpha_max) {
  const int n = alpha_max.dimension();
  for (int i = 0; i < n; ++i) {
    if (alpha_max[i] < 0) throw InvalidOrder("alpha_max must be nonnegative, got " + alpha_max.to_string());
  }
  std::vector<MultiIndex> out;
  MultiIndex a = MultiIndex::zero(n);
  while (true) {
    out.push_back(a);
    int axis = n - 1;
    while (axis >= 0 && a[axis] == alpha_max[axis]) {
      a[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++a[axis];
  }
  return out;
}

}  // namespace

EllipticityReport strong_ellipticity_check(const ToroidalSymbol& sigma, double m, const TruncationWindow& w,
                                           int x_grid) {
  if (w.dim != sigma.dimension()) throw DimensionMismatch("window and symbol dimensions differ");
  EllipticityReport report;
  report.x_samples_per_axis = x_samples(w.dim, x_grid, w.size());
  const auto xs = x_points(w.dim, report.x_samples_per_axis);

  struct Sample {
    double norm;
    double ratio;
    std::size_t x;
    std::size_t k;
  };
  std::vector<Sample> samples;
  samples.reserve(xs.size() * w.size());
  for (std::size_t ki = 0; ki < w.size(); ++ki) {
    const MultiIndex k = w.point_at(ki);
    const double weight = std::pow(bracket(k), m);
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      const double re = sigma(xs[xi], k).real();
      samples.push_back({k.norm(), re / weight, xi, ki});
      if (!(re > 0.0)) {
        ++report.violations;
        report.n0 = std::max(report.n0, static_cast<int>(std::floor(k.norm())) + 1);
      }
    }
  }

  double c0 = HUGE_VAL;
  const Sample* worst = nullptr;
  for (const auto& s : samples) {
    if (s.norm < report.n0) continue;
    if (s.ratio < c0) {
      c0 = s.ratio;
      worst = &s;
    }
  }
  if (worst == nullptr) {
    // every sample violated; report the worst ratio overall
    for (const auto& s : samples) {
      if (worst == nullptr || s.ratio < worst->ratio) worst = &s;
    }
    report.C0 = 0.0;
  } else {
    report.C0 = std::max(c0, 0.0);
  }
  if (worst != nullptr) {
    report.worst_x = xs[worst->x];
    report.worst_k = w.point_at(worst->k);
  }
  report.passed = 2 * report.n0 <= w.radius && report.C0 > 0.0;
  return report;
}

OrderDiagnostic symbol_order_diagnostic(const ToroidalSymbol& sigma, const MultiIndex& alpha_max,
                                        const TruncationWindow& w, int x_grid) {
  if (w.dim != sigma.dimension()) throw DimensionMismatch("window and symbol dimensions differ");
  require_same_dimension(alpha_max, MultiIndex::zero(w.dim));

  std::map<std::int64_t, std::vector<MultiIndex>> shells;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    if (k.norm_squared() > 0) shells[k.norm_squared()].push_back(k);
  }
  if (shells.size() < 4) {
    throw InvalidArgument("window radius " + std::to_string(w.radius) + " gives " +
                          std::to_string(shells.size()) + " nonzero |k| shells; at least 4 are needed");
  }

  OrderDiagnostic out;
  out.x_samples_per_axis = std::min(x_grid, w.dim == 1 ? 16 : 4);
  if (out.x_samples_per_axis < 1) throw InvalidArgument("x grid must have at least one point");
  const auto xs = x_points(w.dim, out.x_samples_per_axis);

  for (const MultiIndex& alpha : alpha_box(alpha_max)) {
    OrderFit fit;
    fit.alpha = alpha;
    std::vector<double> t, y;
    for (const auto& [ns, ks] : shells) {
      double biggest = 0.0;
      for (const auto& k : ks) {
        for (const auto& x : xs) {
          const Complex d = forward_difference([&](const MultiIndex& q) { return sigma(x, q); }, alpha, k);
          biggest = std::max(biggest, std::abs(d));
        }
      }
      if (biggest > 0.0) {
        t.push_back(0.5 * std::log1p(static_cast<double>(ns)));
        y.push_back(std::log(biggest));
      }
    }
    fit.shells = static_cast<int>(t.size());
    if (t.empty()) {
      fit.vanishing = true;
      fit.exponent = -HUGE_VAL;
      fit.implied_order = -HUGE_VAL;
    } else {
      fit.exponent = t.size() >= 2 ? fit_line(t, y).first : 0.0;
      fit.implied_order = fit.exponent + alpha.total();
      for (std::size_t i = 0; i < t.size(); ++i) {
        fit.constant = std::max(fit.constant, std::exp(y[i] - fit.exponent * t[i]));
      }
    }
    out.fits.push_back(fit);
  }
  out.order_estimate = out.fits.front().implied_order;
  return out;
}

NormStep truncated_norm(const ToroidalSymbol& sigma, const TruncationWindow& w) {
  if (w.dim != sigma.dimension()) throw DimensionMismatch("window and symbol dimensions differ");
  NeumaierSum inside;
  NeumaierSum dropped;
  SymbolColumn col;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    sigma.column_into(k, col);
    for (const auto& c : col) {
      if (w.contains(k + c.l)) {
        inside.add(std::abs(c.value));
      } else {
        dropped.add(std::abs(c.value));
      }
    }
  }
  NormStep step;
  step.radius = w.radius;
  step.norm = inside.value().real();
  const double edge = dropped.value().real();
  const int n = w.dim;
  const auto decay = sigma.decay();
  if (auto r = sigma.support_radius()) {
    step.upper = w.radius >= *r ? step.norm + edge : HUGE_VAL;
  } else if (decay && decay->order < -n) {
    step.upper = step.norm + edge + decay->constant * box_tail_power_bound(n, -decay->order, w.radius);
  } else {
    step.upper = HUGE_VAL;
  }
  return step;
}

L1Membership l1_membership_check(const ToroidalSymbol& sigma, const L1MembershipOptions& options) {
  const int n = sigma.dimension();
  L1Membership out;
  const auto support = sigma.support_radius();
  std::optional<double> m = sigma.order();
  bool estimated = false;
  if (support) {
    out.order_source = "finite";
    out.order = -HUGE_VAL;
  } else if (m) {
    out.order_source = "metadata";
    out.order = *m;
  } else {
    out.order_source = "estimated";
    estimated = true;
    const int r = std::min(64, options.max_radius);
    out.order = symbol_order_diagnostic(sigma, MultiIndex::zero(n), TruncationWindow(n, r), 16).order_estimate;
  }

  const bool order_ok = support || out.order < -n;
  if (!support) out.boundary_warning = std::abs(out.order + n) <= (estimated ? 0.1 : 0.0);

  const auto decay = sigma.decay();
  const bool decaying = decay && decay->order < -n;

  const int cap = order_ok ? options.max_radius : std::min(options.max_radius, options.divergent_max_radius);
  bool cauchy = false;
  for (int r = 1;; r *= 2) {
    const TruncationWindow w(n, std::min(r, cap));
    if (w.size() > options.max_points) break;
    const NormStep step = truncated_norm(sigma, w);
    out.ladder.push_back(step);
    if (order_ok) {
      if (step.upper - step.norm <= options.tol) {
        cauchy = true;
        break;
      }
      if (!decaying && !support && out.ladder.size() >= 2 &&
          std::abs(step.norm - out.ladder[out.ladder.size() - 2].norm) <= options.tol) {
        cauchy = true;
        break;
      }
    }
    if (w.radius >= cap) break;
  }

  out.limit_estimate = out.ladder.back().norm;
  if (order_ok && !support && out.ladder.size() >= 3) {
    std::vector<LadderStep> steps;
    for (const auto& s : out.ladder) steps.push_back({s.radius, Complex(s.norm, 0.0), 0.0});
    out.limit_estimate = richardson(steps, -out.order - n).value.real();
  }

  out.in_l1 = order_ok && cauchy;
  if (!order_ok) {
    out.message = out.boundary_warning ? "order m = -n is on the boundary; m < -n is required"
                                       : "order m >= -n; the matrix is not in l1";
  } else if (!cauchy) {
    out.message = "truncated norms did not settle within tolerance by radius " +
                  std::to_string(out.ladder.back().radius);
  } else {
    out.message = "order m < -n and the truncated norms converge";
  }
  return out;
}

}  // namespace torusdet
