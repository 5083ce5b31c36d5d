#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pshcheck/catalog.hpp"
#include "pshcheck/cli.hpp"
#include "pshcheck/criteria.hpp"
#include "pshcheck/expr.hpp"
#include "pshcheck/operators.hpp"
#include "pshcheck/oracle.hpp"
#include "pshcheck/parallel.hpp"

namespace py = pybind11;
using namespace psh;

namespace {

py::dict estimate_dict(const MeanEstimate& m) {
  py::dict d;
  d["value"] = m.value;
  d["std_error"] = m.std_error;
  d["samples"] = m.samples;
  d["hit_minus_infinity"] = m.hit_minus_infinity;
  d["minus_infinity_samples"] = m.minus_infinity_samples;
  return d;
}

py::dict operator_dict(const OperatorEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  d["center_value"] = e.center_value;
  d["inconclusive"] = e.inconclusive;
  if (!e.frames.empty()) d["best_frame"] = e.frames[e.best_frame].label;
  return d;
}

py::dict verdict_dict(const CheckResult& r) {
  py::dict d;
  d["status"] = std::string(to_string(r.verdict.status));
  d["note"] = r.verdict.note;
  py::list witnesses;
  for (const auto& w : r.verdict.witnesses) {
    py::dict x;
    x["point_index"] = w.point_index;
    x["frame"] = w.frame_label;
    x["radii"] = w.radii;
    x["margin"] = w.margin;
    x["std_error"] = w.std_error;
    x["seed"] = w.seed;
    x["budget"] = w.budget;
    witnesses.append(x);
  }
  d["witnesses"] = witnesses;
  py::list points;
  for (const auto& p : r.points) points.append(p.status);
  d["points"] = points;
  return d;
}

UnitaryFrame frame_from(std::size_t n, const std::string& spec) {
  if (spec == "identity") return UnitaryFrame::identity(n);
  if (spec == "swap") return UnitaryFrame::swap(n, 0, 1);
  throw ConfigError("frame must be 'identity' or 'swap'");
}

std::vector<CPoint> to_points(const std::vector<std::vector<Complex>>& grid) {
  std::vector<CPoint> out;
  for (const auto& z : grid) out.emplace_back(z);
  return out;
}

}  // namespace

PYBIND11_MODULE(_pshcheck, m) {
  m.doc() = "Monte Carlo mean-value checks for plurisubharmonic functions";

  py::register_exception<expr::ExpressionError>(m, "ExpressionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  py::class_<expr::Expression>(m, "Expression")
      .def(py::init<std::string_view>(), py::arg("text"))
      .def("__call__", [](const expr::Expression& e, const std::vector<Complex>& z) { return e(z); })
      .def("eval_real", [](const expr::Expression& e, const std::vector<double>& x) { return e.eval_real(x); })
      .def_property_readonly("canonical", &expr::Expression::canonical)
      .def_property_readonly("complex_dim", &expr::Expression::complex_dim)
      .def_property_readonly("real_dim", &expr::Expression::real_dim)
      .def("__repr__", [](const expr::Expression& e) { return "Expression('" + e.canonical() + "')"; });

  m.def("catalog", [] {
    py::list out;
    for (const auto& e : catalog()) {
      py::dict d;
      d["name"] = e.name;
      d["expression"] = e.expression;
      d["space"] = std::string(to_string(e.space));
      d["dimension"] = e.dimension;
      d["label"] = std::string(to_string(e.label));
      d["smoothness"] = std::string(to_string(e.smoothness));
      out.append(d);
    }
    return out;
  });

  m.def("ellipsoid_volume", [](const std::vector<double>& radii) { return ellipsoid_volume(radii); },
        py::arg("radii"));
  m.def("laplace_constant_ball", [](double m_dim) { return laplace_constant(ball_weight(m_dim), m_dim); },
        py::arg("m"));
  m.def("set_worker_count", &set_worker_count, py::arg("workers"));

  m.def(
      "mean_over_ellipsoid",
      [](const expr::Expression& u, const std::vector<Complex>& center, const std::vector<double>& radii,
         const std::string& frame, std::size_t budget, std::uint64_t seed) {
        MeanEstimate est;
        {
          py::gil_scoped_release release;
          est = mean_over_ellipsoid(u.as_eval_fn(), CPoint(center), frame_from(center.size(), frame),
                                    Ellipsoid(radii), budget, seed);
        }
        return estimate_dict(est);
      },
      py::arg("u"), py::arg("center"), py::arg("radii"), py::arg("frame") = "identity",
      py::arg("budget") = kDefaultBudget, py::arg("seed") = 0);

  m.def(
      "d_upper_T",
      [](const expr::Expression& u, const std::vector<Complex>& center, const std::string& frame, std::size_t budget,
         std::uint64_t seed) {
        OperatorEstimate est;
        {
          py::gil_scoped_release release;
          est = d_upper_T(u.as_eval_fn(), CPoint(center), frame_from(center.size(), frame),
                          LimsupSchedule::geometric(0.1, 0.7, 12, 4), LimsupSchedule::geometric(1.0, 0.7, 12, 4),
                          budget, seed);
        }
        return operator_dict(est);
      },
      py::arg("u"), py::arg("center"), py::arg("frame") = "identity", py::arg("budget") = kDefaultBudget,
      py::arg("seed") = 0);

  m.def(
      "min_levi_eigenvalue",
      [](const expr::Expression& u, const std::vector<Complex>& z) {
        return min_levi_eigenvalue(levi_form(u.as_eval_fn(), CPoint(z)));
      },
      py::arg("u"), py::arg("z"));

  m.def(
      "check_mean_value_d",
      [](const expr::Expression& u, const std::vector<std::vector<Complex>>& grid, double r0, std::size_t n_haar,
         std::size_t budget, std::uint64_t seed) {
        if (grid.empty()) throw ConfigError("grid must not be empty");
        CheckOptions o;
        o.budget = budget;
        o.seed = seed;
        CheckResult r;
        {
          py::gil_scoped_release release;
          r = check_mean_value_d(u.as_eval_fn(), to_points(grid), standard_frames(grid[0].size(), true, n_haar, seed),
                                 r0, o);
        }
        return verdict_dict(r);
      },
      py::arg("u"), py::arg("grid"), py::arg("r0") = 0.1, py::arg("n_haar") = 2, py::arg("budget") = kDefaultBudget,
      py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
