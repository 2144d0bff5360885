#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cayley/gradient.hpp"
#include "cayley/optimizer.hpp"
#include "cayley/problems.hpp"
#include "cayley/retraction.hpp"
#include "cayley/transform.hpp"

namespace py = pybind11;
using namespace cayley;

namespace {

TangentVector tangent(const Matrix& u, const Matrix& d) { return TangentVector(StiefelPoint(u), d); }

py::dict run_record(const RunRecord& rec) {
  Matrix hist(static_cast<Index>(rec.history.size()), 5);
  for (std::size_t i = 0; i < rec.history.size(); ++i) {
    const auto& h = rec.history[i];
    hist.row(static_cast<Index>(i)) << h.iter, h.fval, h.grad_norm, h.feasibility, h.cum_time_s;
  }
  py::dict out;
  out["history"] = hist;  // columns: iter, fval, grad_norm, feasibility, cum_time_s
  out["final_u"] = rec.final_u;
  out["stop_reason"] = to_string(rec.stop_reason);
  out["iterations"] = rec.iterations();
  return out;
}

BacktrackingConfig backtracking(double gamma, double c, double rho, int max_halvings) {
  BacktrackingConfig bt;
  bt.gamma_initial = gamma;
  bt.c = c;
  bt.rho = rho;
  bt.max_halvings = max_halvings;
  return bt;
}

StoppingConfig stopping(int max_iters, double grad_ratio_tol, double fval_rel_tol) {
  return StoppingConfig{max_iters, grad_ratio_tol, fval_rel_tol};
}

RetractionKind retraction_kind(const std::string& name) {
  if (name == "qr") return RetractionKind::kQr;
  if (name == "polar") return RetractionKind::kPolar;
  if (name == "cayley") return RetractionKind::kCayley;
  throw py::value_error("unknown retraction '" + name + "'");
}

}  // namespace

#define RUN_ARGS                                                                                         \
  py::arg("gamma") = 1e-3, py::arg("c") = 0x1.0p-13, py::arg("rho") = 0.5, py::arg("max_halvings") = 60, \
      py::arg("max_iters") = 5000, py::arg("grad_ratio_tol") = 1e-10, py::arg("fval_rel_tol") = 1e-20

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cayley parametrization of the Stiefel manifold";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionError>(m, "DimensionError", error);
  py::register_exception<RankError>(m, "RankError", error);
  py::register_exception<FactorizationError>(m, "FactorizationError", error);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", error);
  py::register_exception<SingularPointError>(m, "SingularPointError", error);
  py::register_exception<PreconditionError>(m, "PreconditionError", error);
  py::register_exception<StepTooLargeError>(m, "StepTooLargeError", error);
  py::register_exception<LineSearchStalled>(m, "LineSearchStalled", error);

  py::class_<SkewParam>(m, "SkewParam")
      .def(py::init<Matrix, Matrix>(), py::arg("a"), py::arg("b"))
      .def_static("zero", &SkewParam::zero, py::arg("n"), py::arg("p"))
      .def_static("from_dense", &SkewParam::from_dense, py::arg("v"), py::arg("p"))
      .def_property_readonly("a", &SkewParam::a)
      .def_property_readonly("b", &SkewParam::b)
      .def_property_readonly("n", &SkewParam::n)
      .def_property_readonly("p", &SkewParam::p)
      .def("to_dense", &SkewParam::to_dense)
      .def("inner", &SkewParam::inner)
      .def("norm", &SkewParam::norm)
      .def("spectral_norm", &SkewParam::spectral_norm)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def(py::self * double());

  py::class_<CenterPoint>(m, "CenterPoint")
      .def_static("identity", &CenterPoint::identity, py::arg("n"), py::arg("p"))
      .def_static("structured", &CenterPoint::structured, py::arg("t"), py::arg("n"))
      .def_static("general", &CenterPoint::general, py::arg("s"), py::arg("p"))
      .def_property_readonly("n", &CenterPoint::n)
      .def_property_readonly("p", &CenterPoint::p)
      .def_property_readonly("is_structured", &CenterPoint::is_structured)
      .def("left", &CenterPoint::left)
      .def("right", &CenterPoint::right)
      .def("dense", &CenterPoint::dense);

  py::class_<CostFunction>(m, "CostFunction")
      .def(py::init<Index, Index, CostFunction::ValueFn, CostFunction::GradientFn>(), py::arg("n"), py::arg("p"),
           py::arg("value"), py::arg("gradient"))
      .def_property_readonly("n", &CostFunction::n)
      .def_property_readonly("p", &CostFunction::p)
      .def("value", &CostFunction::value)
      .def("gradient", &CostFunction::gradient);

  py::class_<EigenInstance>(m, "EigenInstance")
      .def_readonly("a", &EigenInstance::a)
      .def_readonly("optimum_value", &EigenInstance::optimum_value)
      .def_readonly("optimum_basis", &EigenInstance::optimum_basis)
      .def_readonly("top_eigenvalues", &EigenInstance::top_eigenvalues)
      .def_readonly("n", &EigenInstance::n)
      .def_readonly("p", &EigenInstance::p)
      .def_readonly("seed", &EigenInstance::seed);

  m.def("make_eigen_instance", &make_eigen_instance, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("eigen_instance_from_matrix", &eigen_instance_from_matrix, py::arg("a"), py::arg("p"),
        py::arg("seed") = 0);
  m.def("eigen_cost", &eigen_cost, py::arg("instance"));
  m.def("distance_cost", [](const Matrix& target) { return distance_cost(StiefelPoint(target)); },
        py::arg("target"));
  m.def("constant_cost", &constant_cost, py::arg("n"), py::arg("p"), py::arg("c") = 0.0);
  m.def(
      "rotation_center",
      [](double theta, Index n, Index p) {
        RotationCenter rc = rotation_center(theta, n, p);
        return py::make_tuple(rc.center, rc.left.mat());
      },
      py::arg("theta"), py::arg("n"), py::arg("p"));

  m.def("feasibility", &feasibility, py::arg("u"));
  m.def("forward", [](const CenterPoint& s, const Matrix& u) { return forward(s, StiefelPoint(u)); },
        py::arg("center"), py::arg("u"));
  m.def("inverse", [](const CenterPoint& s, const SkewParam& v) { return inverse(s, v).mat(); },
        py::arg("center"), py::arg("v"));
  m.def("construct_center", [](const Matrix& u) { return construct_center(StiefelPoint(u)); }, py::arg("u"));
  m.def("align_right_invariant",
        [](const CenterPoint& s, const Matrix& u) { return align_right_invariant(s, StiefelPoint(u)).mat(); },
        py::arg("center"), py::arg("u"));
  m.def(
      "singular_diagnostic",
      [](const CenterPoint& s, const SkewParam& v) {
        const SingularDiagnostic g = singular_diagnostic(s, v);
        return py::make_tuple(g.value, g.log_value);
      },
      py::arg("center"), py::arg("v"));
  m.def("mobility", &mobility, py::arg("v"));
  m.def("canonicalize_general_skew", &canonicalize_general_skew, py::arg("w"), py::arg("center"));

  m.def("grad_pullback",
        py::overload_cast<const CenterPoint&, const SkewParam&, const CostFunction&>(&grad_pullback),
        py::arg("center"), py::arg("v"), py::arg("f"));
  m.def("grad_at_zero", &grad_at_zero, py::arg("center"), py::arg("f"));
  m.def("transform_gradient", &transform_gradient, py::arg("s1"), py::arg("v1"), py::arg("s2"), py::arg("v2"),
        py::arg("g2"));
  m.def("stationarity_residual",
        [](const Matrix& u, const CostFunction& f) { return stationarity_residual(StiefelPoint(u), f); },
        py::arg("u"), py::arg("f"));

  m.def("project_tangent", [](const Matrix& u, const Matrix& x) { return project_tangent(StiefelPoint(u), x).mat(); },
        py::arg("u"), py::arg("x"));
  m.def("retract_qr", [](const Matrix& u, const Matrix& d) { return retract_qr(StiefelPoint(u), tangent(u, d)).mat(); },
        py::arg("u"), py::arg("d"));
  m.def("retract_polar",
        [](const Matrix& u, const Matrix& d) { return retract_polar(StiefelPoint(u), tangent(u, d)).mat(); },
        py::arg("u"), py::arg("d"));
  m.def("retract_cayley",
        [](const Matrix& u, const Matrix& d) { return retract_cayley(StiefelPoint(u), tangent(u, d)).mat(); },
        py::arg("u"), py::arg("d"));
  m.def("inverse_retract_cayley",
        [](const Matrix& u, const Matrix& f) {
          return inverse_retract_cayley(StiefelPoint(u), StiefelPoint(f)).mat();
        },
        py::arg("u"), py::arg("target"));
  m.def("grad_retraction_pullback",
        [](const Matrix& u, const Matrix& d, const CostFunction& f) {
          return grad_retraction_pullback(StiefelPoint(u), tangent(u, d), f).mat();
        },
        py::arg("u"), py::arg("d"), py::arg("f"));

  m.def(
      "run_gdm_cp",
      [](const CostFunction& f, const Matrix& u0, std::optional<CenterPoint> center, double gamma, double c,
         double rho, int max_halvings, int max_iters, double grad_ratio_tol, double fval_rel_tol) {
        return run_record(run_gdm_cp(f, StiefelPoint(u0), center, backtracking(gamma, c, rho, max_halvings),
                                     stopping(max_iters, grad_ratio_tol, fval_rel_tol)));
      },
      py::arg("f"), py::arg("u0"), py::arg("center") = std::nullopt, RUN_ARGS);
  m.def(
      "run_gdm_cp_retraction",
      [](const CostFunction& f, const Matrix& anchor, const Matrix& u0, double gamma, double c, double rho,
         int max_halvings, int max_iters, double grad_ratio_tol, double fval_rel_tol) {
        return run_record(run_gdm_cp_retraction(f, StiefelPoint(anchor), StiefelPoint(u0),
                                                backtracking(gamma, c, rho, max_halvings),
                                                stopping(max_iters, grad_ratio_tol, fval_rel_tol)));
      },
      py::arg("f"), py::arg("anchor"), py::arg("u0"), RUN_ARGS);
  m.def(
      "run_gdm_retraction",
      [](const CostFunction& f, const Matrix& u0, const std::string& kind, double gamma, double c, double rho,
         int max_halvings, int max_iters, double grad_ratio_tol, double fval_rel_tol) {
        return run_record(run_gdm_retraction(f, StiefelPoint(u0), retraction_kind(kind),
                                             backtracking(gamma, c, rho, max_halvings),
                                             stopping(max_iters, grad_ratio_tol, fval_rel_tol)));
      },
      py::arg("f"), py::arg("u0"), py::arg("kind"), RUN_ARGS);
}
