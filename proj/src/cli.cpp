#include "torusdet/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "torusdet/diagnostics.hpp"
#include "torusdet/hill.hpp"
#include "torusdet/io.hpp"
#include "torusdet/poincare.hpp"
#include "torusdet/toroidal.hpp"

namespace torusdet {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;

struct RunConfig {
  std::string command;
  std::string input;
  double tol = 1e-8;
  int max_radius = 64;
  int grid = 256;
  std::string format = "json";
  int radius = 0;
};

// --- output --------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const ojson& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(k).dump() << ": ";
        emit(v, os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        emit(v, os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << format_double(v);
      } else {
        os << '"' << (std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf") << '"';
      }
      return;
    }
    default:
      os << j.dump();
  }
}

ojson complex_json(Complex z) {
  ojson j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

ojson index_json(const MultiIndex& k) {
  ojson j = ojson::array();
  for (int c : k.coords()) j.push_back(c);
  return j;
}

ojson ladder_json(const std::vector<LadderStep>& ladder) {
  ojson j = ojson::array();
  for (const auto& s : ladder) {
    ojson e;
    e["radius"] = s.radius;
    e["value"] = complex_json(s.value);
    e["bound"] = s.bound;
    j.push_back(e);
  }
  return j;
}

ojson determinant_json(const DeterminantResult& r) {
  ojson j;
  j["value"] = complex_json(r.value);
  j["certified_error"] = r.certified_error;
  j["converged"] = r.converged;
  j["extrapolation_level"] = r.extrapolation_level;
  j["ladder"] = ladder_json(r.ladder);
  return j;
}

ojson sequence_json(const LatticeSequence& s, double floor) {
  ojson j = ojson::array();
  for (const auto& [k, v] : s) {
    if (std::abs(v) <= floor) continue;
    ojson e;
    e["index"] = index_json(k);
    e["re"] = v.real();
    e["im"] = v.imag();
    j.push_back(e);
  }
  return j;
}

LadderOptions ladder_options(const RunConfig& cfg) {
  LadderOptions o;
  o.max_radius = cfg.max_radius;
  o.require_convergence = false;
  return o;
}

// --- commands ------------------------------------------------------------------------

int run_det(const RunConfig& cfg, ojson& out) {
  const MatrixInput in = parse_matrix(read_text_file(cfg.input));
  const DeterminantResult r = poincare_determinant(in.matrix, in.tail, cfg.tol, ladder_options(cfg));
  out.update(determinant_json(r));
  out["decision"] = to_string(classify_determinant(r, cfg.tol));
  return r.converged ? kExitOk : kExitUndecided;
}

int run_trace(const RunConfig& cfg, ojson& out) {
  const MatrixInput in = parse_matrix(read_text_file(cfg.input));
  TraceOptions o;
  o.require_convergence = false;
  const TraceResult r = poincare_trace(in.matrix, in.tail, cfg.tol, o);
  out["value"] = complex_json(r.value);
  out["certified_error"] = r.certified_error;
  out["converged"] = r.converged;
  out["ladder"] = ladder_json(r.ladder);
  return r.converged ? kExitOk : kExitUndecided;
}

int run_symbol2matrix(const RunConfig& cfg, ojson& out) {
  const ToroidalSymbol sigma = parse_symbol(read_text_file(cfg.input));
  const TruncationWindow w(sigma.dimension(), cfg.radius);
  const SymbolMatrix sm = symbol_to_matrix(sigma, w);
  out["radius"] = cfg.radius;
  out["summability"] = to_string(sm.summability);
  out["diagnostic"] = sm.diagnostic;
  out["l1_norm"] = sm.matrix.l1_norm();
  out["tail_bound"] = sm.tail.bound(cfg.radius);
  ojson entries = ojson::array();
  for (const auto& e : sm.matrix.entries()) {
    ojson j;
    j["row"] = index_json(e.row);
    j["col"] = index_json(e.col);
    j["re"] = e.value.real();
    j["im"] = e.value.imag();
    entries.push_back(j);
  }
  out["entries"] = entries;
  ojson ladder = ojson::array();
  for (int r = 1;; r = std::min(2 * r, cfg.radius)) {
    if (cfg.radius == 0) break;
    const NormStep s = truncated_norm(sigma, TruncationWindow(sigma.dimension(), r));
    ojson j;
    j["radius"] = s.radius;
    j["norm"] = s.norm;
    j["upper"] = s.upper;
    ladder.push_back(j);
    if (r == cfg.radius) break;
  }
  out["norm_ladder"] = ladder;
  return kExitOk;
}

int run_diagnose(const RunConfig& cfg, ojson& out) {
  const ToroidalSymbol sigma = parse_symbol(read_text_file(cfg.input));
  const int n = sigma.dimension();
  out["dimension"] = n;

  std::optional<double> order = sigma.order();
  ojson order_json;
  try {
    const MultiIndex alpha_max = [&] {
      MultiIndex a = MultiIndex::zero(n);
      for (int i = 0; i < n; ++i) a[i] = n == 1 ? 2 : 1;
      return a;
    }();
    const OrderDiagnostic d =
        symbol_order_diagnostic(sigma, alpha_max, TruncationWindow(n, std::min(cfg.max_radius, 64)), cfg.grid);
    order_json["estimate"] = d.order_estimate;
    ojson fits = ojson::array();
    for (const auto& f : d.fits) {
      ojson j;
      j["alpha"] = index_json(f.alpha);
      j["vanishing"] = f.vanishing;
      j["exponent"] = f.exponent;
      j["implied_order"] = f.implied_order;
      j["constant"] = f.constant;
      j["shells"] = f.shells;
      fits.push_back(j);
    }
    order_json["fits"] = fits;
    if (!order) order = d.order_estimate;
  } catch (const InvalidArgument& e) {
    order_json["error"] = e.what();
  }
  if (sigma.order()) order_json["declared"] = *sigma.order();
  out["order"] = order_json;

  ojson ell;
  if (order && std::isfinite(*order)) {
    const EllipticityReport e = strong_ellipticity_check(sigma, *order, TruncationWindow(n, cfg.max_radius), cfg.grid);
    ell["m"] = *order;
    ell["passed"] = e.passed;
    ell["C0"] = e.C0;
    ell["n0"] = e.n0;
    ell["violations"] = e.violations;
    ell["worst_x"] = e.worst_x;
    ell["worst_k"] = index_json(e.worst_k);
    ell["x_samples_per_axis"] = e.x_samples_per_axis;
  } else {
    ell["error"] = "no order available";
  }
  out["ellipticity"] = ell;

  L1MembershipOptions mo;
  mo.tol = cfg.tol;
  const L1Membership m = l1_membership_check(sigma, mo);
  ojson mem;
  mem["in_l1"] = m.in_l1;
  mem["order"] = m.order;
  mem["order_source"] = m.order_source;
  mem["boundary_warning"] = m.boundary_warning;
  mem["limit_estimate"] = m.limit_estimate;
  mem["message"] = m.message;
  ojson ladder = ojson::array();
  for (const auto& s : m.ladder) {
    ojson j;
    j["radius"] = s.radius;
    j["norm"] = s.norm;
    j["upper"] = s.upper;
    ladder.push_back(j);
  }
  mem["ladder"] = ladder;
  out["l1_membership"] = mem;
  return kExitOk;
}

int run_hill_check(const RunConfig& cfg, ojson& out) {
  const HillInput in = parse_hill(read_text_file(cfg.input));
  const LadderOptions o = ladder_options(cfg);
  const ExistenceReport rep = existence_test(in.problem, cfg.tol, o);
  const DeterminantResult literal = hill_determinant(in.problem, cfg.tol, o);
  out["decision"] = to_string(rep.decision);
  out["equation_determinant"] = determinant_json(rep.determinant);
  out["hill_determinant"] = determinant_json(literal);
  out["solution"] = nullptr;
  if (rep.decision != Existence::only_trivial) {
    const TruncationWindow w = det_gamma_window(in.problem.dimension(), o);
    try {
      const SolutionCandidate c = extract_null_solution(in.problem, w);
      ojson s;
      s["radius"] = c.window.radius;
      s["residual"] = c.residual;
      s["smallest_singular_value"] = c.smallest_singular_value;
      s["regularity_mass"] = c.regularity_mass;
      s["regularity_bound"] = c.regularity_bound;
      s["coefficients"] = sequence_json(c.b, 1e-12);
      out["solution"] = s;
    } catch (const NoNullSolution& e) {
      out["solution_error"] = e.what();
    }
  }
  return rep.decision == Existence::undecided ? kExitUndecided : kExitOk;
}

int run_hill_scan(const RunConfig& cfg, ojson& out, std::string& csv) {
  const HillInput in = parse_hill(read_text_file(cfg.input));
  const ScanGrid grid = in.scan.value_or(ScanGrid{});
  ScanOptions o;
  o.radius = cfg.max_radius;
  const std::vector<double> lambdas = linspace(grid.lambda_min, grid.lambda_max, grid.steps);
  const SpectralScan scan = spectral_shift_scan(in.problem, lambdas, cfg.tol, o);

  if (cfg.format == "csv") {
    std::ostringstream ss;
    ss << "lambda,det_re,det_im,certified_error\n";
    for (const auto& p : scan.points) {
      ss << format_double(p.lambda) << ',' << format_double(p.det.real()) << ',' << format_double(p.det.imag())
         << ',' << format_double(p.certified_error) << '\n';
    }
    ss << "\nroot_lambda,abs_det,certified_error,bracket_lo,bracket_hi,kind\n";
    for (const auto& r : scan.roots) {
      ss << format_double(r.lambda) << ',' << format_double(r.abs_det) << ',' << format_double(r.certified_error)
         << ',' << format_double(r.bracket.lo) << ',' << format_double(r.bracket.hi) << ','
         << to_string(r.bracket.kind) << '\n';
    }
    csv = ss.str();
    return kExitOk;
  }

  out["radius"] = scan.radius;
  auto bracket_json = [](const ScanBracket& b) {
    ojson j;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["kind"] = to_string(b.kind);
    return j;
  };
  ojson roots = ojson::array();
  for (const auto& r : scan.roots) {
    ojson j;
    j["lambda"] = r.lambda;
    j["abs_det"] = r.abs_det;
    j["certified_error"] = r.certified_error;
    j["bracket"] = bracket_json(r.bracket);
    roots.push_back(j);
  }
  out["roots"] = roots;
  ojson rejected = ojson::array();
  for (const auto& r : scan.rejected) {
    ojson j;
    j["lambda"] = r.lambda;
    j["abs_det"] = r.abs_det;
    j["certified_error"] = r.certified_error;
    j["bracket"] = bracket_json(r.bracket);
    rejected.push_back(j);
  }
  out["rejected"] = rejected;
  ojson points = ojson::array();
  for (const auto& p : scan.points) {
    ojson j;
    j["lambda"] = p.lambda;
    j["det"] = complex_json(p.det);
    j["certified_error"] = p.certified_error;
    points.push_back(j);
  }
  out["points"] = points;
  return kExitOk;
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Certified determinants and traces of l1 matrices, toroidal symbols and Hill problems"};
  app.require_subcommand(1);
  app.add_option("--tol", cfg.tol, "Target certified error")->check(CLI::PositiveNumber);
  app.add_option("--max-radius", cfg.max_radius, "Largest window radius")->check(CLI::PositiveNumber);
  app.add_option("--grid", cfg.grid, "x grid size per axis (power of two)")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            int m = 0;
            const bool ok = CLI::detail::lexical_cast(s, m) && is_power_of_two(m);
            return ok ? "" : "grid size must be a power of two, got " + s;
          },
          "POWER_OF_TWO"));
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto file_command = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("file", cfg.input, "Input JSON document")->required();
    return sub;
  };
  CLI::App* det = file_command(&app, "det", "Poincare determinant of I + A for a matrix file");
  CLI::App* trace = file_command(&app, "trace", "Trace of a matrix file");
  CLI::App* s2m = file_command(&app, "symbol2matrix", "Matrix of a symbol on one window");
  s2m->add_option("--radius", cfg.radius, "Window radius")->required()->check(CLI::NonNegativeNumber);
  CLI::App* diag = file_command(&app, "diagnose", "Ellipticity, order and l1 membership of a symbol");
  CLI::App* hill = app.add_subcommand("hill", "Hill problems");
  hill->fallthrough();
  hill->require_subcommand(1);
  CLI::App* check = file_command(hill, "check", "Decide existence of nontrivial periodic solutions");
  CLI::App* scan = file_command(hill, "scan", "Scan the potential shift for roots of the determinant");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  const auto start = std::chrono::steady_clock::now();
  ojson result;
  std::string csv;
  int status = kExitError;
  try {
    if (cfg.format == "csv" && !scan->parsed()) {
      throw InvalidArgument("csv output is only available for hill scan");
    }
    if (det->parsed()) {
      result["command"] = "det";
      status = run_det(cfg, result);
    } else if (trace->parsed()) {
      result["command"] = "trace";
      status = run_trace(cfg, result);
    } else if (s2m->parsed()) {
      result["command"] = "symbol2matrix";
      status = run_symbol2matrix(cfg, result);
    } else if (diag->parsed()) {
      result["command"] = "diagnose";
      status = run_diagnose(cfg, result);
    } else if (check->parsed()) {
      result["command"] = "hill check";
      status = run_hill_check(cfg, result);
    } else if (scan->parsed()) {
      result["command"] = "hill scan";
      status = run_hill_scan(cfg, result, csv);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  if (!csv.empty()) {
    out << csv;
  } else {
    emit(result, out, 0);
    out << '\n';
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "elapsed_seconds: " << format_double(elapsed) << '\n';
  return status;
}

}  // namespace torusdet
