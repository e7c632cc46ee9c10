#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "torusdet/cli.hpp"
#include "torusdet/diagnostics.hpp"
#include "torusdet/hill.hpp"
#include "torusdet/io.hpp"
#include "torusdet/l1_matrix.hpp"
#include "torusdet/poincare.hpp"
#include "torusdet/toroidal.hpp"

namespace py = pybind11;
using namespace torusdet;

namespace {

using Index = std::vector<int>;

MultiIndex to_index(const Index& v) { return MultiIndex(std::span<const int>(v)); }
Index from_index(const MultiIndex& k) { return {k.coords().begin(), k.coords().end()}; }

LatticeSequence to_sequence(const std::map<Index, Complex>& m) {
  LatticeSequence s;
  for (const auto& [k, v] : m) s[to_index(k)] = v;
  return s;
}

py::tuple key(const MultiIndex& k) { return py::tuple(py::cast(from_index(k))); }

py::dict from_sequence(const LatticeSequence& s) {
  py::dict d;
  for (const auto& [k, v] : s) d[key(k)] = v;
  return d;
}

LadderOptions ladder(int max_radius, bool require_convergence) {
  LadderOptions o;
  o.max_radius = max_radius;
  o.require_convergence = require_convergence;
  return o;
}

}  // namespace

PYBIND11_MODULE(_torusdet, m) {
  m.doc() = "Certified determinants of l1 lattice matrices, toroidal symbols and Hill problems";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NotSummable>(m, "NotSummable", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_ArithmeticError);

  py::class_<TailModel>(m, "TailModel")
      .def_static("exact", &TailModel::exact)
      .def_static("constant", &TailModel::constant, py::arg("bound"))
      .def_static("power_law", &TailModel::power_law, py::arg("constant"), py::arg("exponent"))
      .def("bound", &TailModel::bound, py::arg("radius"));

  py::class_<SparseL1Matrix>(m, "Matrix")
      .def(py::init([](int dim, const std::vector<std::tuple<Index, Index, Complex>>& entries) {
             std::vector<MatrixEntry> e;
             e.reserve(entries.size());
             for (const auto& [r, c, v] : entries) e.push_back({to_index(r), to_index(c), v});
             return SparseL1Matrix(dim, e);
           }),
           py::arg("dim"), py::arg("entries"))
      .def_property_readonly("dim", &SparseL1Matrix::dimension)
      .def_property_readonly("nnz", &SparseL1Matrix::nnz)
      .def("l1_norm", &SparseL1Matrix::l1_norm)
      .def("at", [](const SparseL1Matrix& a, const Index& r, const Index& c) { return a.at(to_index(r), to_index(c)); })
      .def("entries",
           [](const SparseL1Matrix& a) {
             py::list out;
             for (const auto& e : a.entries()) out.append(py::make_tuple(key(e.row), key(e.col), e.value));
             return out;
           })
      .def("transpose", [](const SparseL1Matrix& a) { return transpose(a); })
      .def("__matmul__", [](const SparseL1Matrix& a, const SparseL1Matrix& b) { return compose(a, b); })
      .def("apply", [](const SparseL1Matrix& a, const std::map<Index, Complex>& x) {
        return from_sequence(torusdet::apply(a, to_sequence(x)));
      });

  py::class_<DeterminantResult>(m, "DeterminantResult")
      .def_readonly("value", &DeterminantResult::value)
      .def_readonly("certified_error", &DeterminantResult::certified_error)
      .def_readonly("converged", &DeterminantResult::converged)
      .def_property_readonly("ladder", [](const DeterminantResult& r) {
        std::vector<std::tuple<int, Complex, double>> out;
        for (const auto& s : r.ladder) out.emplace_back(s.radius, s.value, s.bound);
        return out;
      });

  py::class_<TraceResult>(m, "TraceResult")
      .def_readonly("value", &TraceResult::value)
      .def_readonly("certified_error", &TraceResult::certified_error)
      .def_readonly("converged", &TraceResult::converged);

  m.def(
      "determinant",
      [](const SparseL1Matrix& a, const TailModel& tail, double tol, int max_radius, bool require_convergence) {
        return poincare_determinant(a, tail, tol, ladder(max_radius, require_convergence));
      },
      py::arg("matrix"), py::arg("tail") = TailModel::exact(), py::arg("tol") = 1e-8, py::arg("max_radius") = 64,
      py::arg("require_convergence") = false);

  m.def(
      "trace",
      [](const SparseL1Matrix& a, const TailModel& tail, double tol) {
        TraceOptions o;
        o.require_convergence = false;
        return poincare_trace(a, tail, tol, o);
      },
      py::arg("matrix"), py::arg("tail") = TailModel::exact(), py::arg("tol") = 1e-8);

  m.def(
      "invertibility",
      [](const SparseL1Matrix& a, const TailModel& tail, double tol) {
        return to_string(invertibility_test(a, tail, tol).decision);
      },
      py::arg("matrix"), py::arg("tail") = TailModel::exact(), py::arg("tol") = 1e-8);

  py::class_<HillProblem>(m, "HillProblem")
      .def(py::init([](int dim, double nu, const std::map<Index, Complex>& potential) {
             return HillProblem(dim, nu, to_sequence(potential));
           }),
           py::arg("dim"), py::arg("nu"), py::arg("potential"))
      .def_property_readonly("dim", &HillProblem::dimension)
      .def_property_readonly("nu", &HillProblem::nu)
      .def_property_readonly("potential", [](const HillProblem& p) { return from_sequence(p.potential()); });

  m.def(
      "hill_determinant",
      [](const HillProblem& p, double tol, int max_radius) { return hill_determinant(p, tol, ladder(max_radius, false)); },
      py::arg("problem"), py::arg("tol") = 1e-8, py::arg("max_radius") = 64);

  m.def(
      "existence_test",
      [](const HillProblem& p, double tol, int max_radius) {
        const ExistenceReport r = existence_test(p, tol, ladder(max_radius, false));
        return std::make_pair(to_string(r.decision), r.determinant);
      },
      py::arg("problem"), py::arg("tol") = 1e-8, py::arg("max_radius") = 64);

  m.def(
      "extract_null_solution",
      [](const HillProblem& p, int radius, double threshold) {
        const SolutionCandidate c = extract_null_solution(p, TruncationWindow(p.dimension(), radius), threshold);
        py::dict d;
        d["coefficients"] = from_sequence(c.b);
        d["residual"] = c.residual;
        d["smallest_singular_value"] = c.smallest_singular_value;
        d["regularity_mass"] = c.regularity_mass;
        d["regularity_bound"] = c.regularity_bound;
        return d;
      },
      py::arg("problem"), py::arg("radius") = 16, py::arg("threshold") = 1e-6);

  m.def(
      "spectral_shift_scan",
      [](const HillProblem& p, const std::vector<double>& lambdas, double tol, int radius) {
        ScanOptions o;
        o.radius = radius;
        const SpectralScan s = spectral_shift_scan(p, lambdas, tol, o);
        std::vector<double> roots;
        for (const auto& r : s.roots) roots.push_back(r.lambda);
        return roots;
      },
      py::arg("problem"), py::arg("lambdas"), py::arg("tol") = 1e-8, py::arg("radius") = 64);

  py::class_<ToroidalSymbol>(m, "Symbol")
      .def_property_readonly("dim", &ToroidalSymbol::dimension)
      .def_property_readonly("label", &ToroidalSymbol::label)
      .def_property_readonly("order", &ToroidalSymbol::order)
      .def("__call__",
           [](const ToroidalSymbol& s, const std::vector<double>& x, const Index& k) { return s(x, to_index(k)); })
      .def("column", [](const ToroidalSymbol& s, const Index& k) {
        py::dict out;
        for (const auto& c : s.column(to_index(k))) out[key(c.l)] = c.value;
        return out;
      });

  m.def("fractional_laplacian", &fractional_laplacian_symbol, py::arg("nu"), py::arg("dim"));
  m.def("bracket_power", &bracket_power_symbol, py::arg("dim"), py::arg("power"), py::arg("scale") = 1.0);
  m.def(
      "separable",
      [](int dim, const std::map<Index, Complex>& coefficients, double power, double scale) {
        return ToroidalSymbol::separable(dim, to_sequence(coefficients), power, scale);
      },
      py::arg("dim"), py::arg("coefficients"), py::arg("power"), py::arg("scale") = 1.0);
  m.def(
      "multiplier",
      [](int dim, std::function<Complex(const Index&)> fn) {
        return ToroidalSymbol::multiplier(dim, [fn](const MultiIndex& k) {
          py::gil_scoped_acquire gil;
          return fn(from_index(k));
        });
      },
      py::arg("dim"), py::arg("fn"));
  m.def("parse_symbol", [](const std::string& text) { return parse_symbol(text); }, py::arg("text"));

  m.def(
      "det_gamma",
      [](const ToroidalSymbol& s, double tol, int max_radius) { return det_gamma(s, tol, ladder(max_radius, false)); },
      py::arg("symbol"), py::arg("tol") = 1e-8, py::arg("max_radius") = 64);

  m.def(
      "l1_membership",
      [](const ToroidalSymbol& s, double tol) {
        L1MembershipOptions o;
        o.tol = tol;
        const L1Membership r = l1_membership_check(s, o);
        py::dict d;
        d["in_l1"] = r.in_l1;
        d["order"] = r.order;
        d["order_source"] = r.order_source;
        d["boundary_warning"] = r.boundary_warning;
        d["norm"] = r.ladder.empty() ? 0.0 : r.ladder.back().norm;
        d["limit_estimate"] = r.limit_estimate;
        d["message"] = r.message;
        return d;
      },
      py::arg("symbol"), py::arg("tol") = 1e-6);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int status = run_cli(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"));
}
