#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlsb/bracket.hpp"
#include "nlsb/dirac.hpp"
#include "nlsb/onegap.hpp"
#include "nlsb/potential.hpp"
#include "nlsb/spectrum.hpp"
#include "nlsb/toda.hpp"
#include "nlsb/weyl.hpp"

namespace py = pybind11;
using namespace nlsb;

PYBIND11_MODULE(_nlsb, m) {
  m.doc() =
      "Periodic Dirac spectral theory for the cubic Schrodinger field: "
      "monodromy, Floquet spectrum, Weyl functions, divisor variables, "
      "bracket-identity verification, and an open Toda lattice module.";

  // Later registrations are matched first, so the derived ConfigError must
  // come after the base Error to map onto ValueError.
  py::register_exception<Error>(m, "NlsbError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "NlsbConfigError", PyExc_ValueError);

  py::class_<IntegratorOptions>(m, "IntegratorOptions")
      .def(py::init<>())
      .def_readwrite("tol", &IntegratorOptions::tol)
      .def_readwrite("im_cap_scaled", &IntegratorOptions::im_cap_scaled)
      .def_readwrite("min_step_fraction",
                     &IntegratorOptions::min_step_fraction);

  py::class_<Potential>(m, "Potential")
      .def(py::init<double>(), py::arg("half_period"))
      .def(py::init<double, std::map<int, cplx>>(), py::arg("half_period"),
           py::arg("coeffs"))
      .def_static("plane_wave", &Potential::plane_wave, py::arg("C"),
                  py::arg("n"), py::arg("half_period"))
      .def_static("from_json", &Potential::from_json_text, py::arg("text"))
      .def("to_json", &Potential::to_json_text)
      .def_property_readonly("half_period", &Potential::half_period)
      .def_property_readonly("coeffs", &Potential::coeffs)
      .def("eval", &Potential::eval, py::arg("x"))
      .def("derivative", &Potential::derivative, py::arg("x"))
      .def("translated", &Potential::translated, py::arg("a"))
      .def("is_zero", &Potential::is_zero)
      .def(
          "conserved_quantities",
          [](const Potential& p, std::size_t n) {
            const auto c = p.conserved_quantities(n);
            return py::make_tuple(c.h1, c.h2, c.h3);
          },
          py::arg("quad_points") = 512);

  py::enum_<Sheet>(m, "Sheet")
      .value("plus", Sheet::plus)
      .value("minus", Sheet::minus);

  py::enum_<Quadrature>(m, "Quadrature")
      .value("simpson", Quadrature::simpson)
      .value("trapezoid", Quadrature::trapezoid);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def(py::init([](cplx lambda, cplx w, double base_x) {
             return CurvePoint{lambda, w, base_x};
           }),
           py::arg("lam"), py::arg("w"), py::arg("base_x") = 0.0)
      .def_readwrite("lam", &CurvePoint::lambda)
      .def_readwrite("w", &CurvePoint::w)
      .def_readwrite("base_x", &CurvePoint::base_x)
      .def("sheet_swapped", &CurvePoint::sheet_swapped)
      .def("conjugated", &CurvePoint::conjugated);

  m.def(
      "discriminant",
      [](const Potential& pot, cplx lam, const IntegratorOptions& opts) {
        const Discriminant d = discriminant(pot, lam, opts);
        return py::make_tuple(d.delta, d.delta_prime);
      },
      py::arg("pot"), py::arg("lam"),
      py::arg("opts") = IntegratorOptions{});

  m.def(
      "monodromy",
      [](const Potential& pot, double x, cplx lam,
         const IntegratorOptions& opts) { return monodromy(pot, x, lam, opts).m; },
      py::arg("pot"), py::arg("x"), py::arg("lam"),
      py::arg("opts") = IntegratorOptions{});

  m.def(
      "transition_matrix",
      [](const Potential& pot, double x, double y, cplx lam,
         const IntegratorOptions& opts) {
        return transition_matrix(pot, x, y, lam, opts).m;
      },
      py::arg("pot"), py::arg("x"), py::arg("y"), py::arg("lam"),
      py::arg("opts") = IntegratorOptions{});

  m.def("floquet_roots", &floquet_roots, py::arg("delta"));
  m.def("floquet_multiplier", &floquet_multiplier, py::arg("pot"),
        py::arg("lam"), py::arg("sheet"), py::arg("opts") = IntegratorOptions{},
        py::arg("branch_tol") = 1e-8);
  m.def("omega", &omega, py::arg("q"), py::arg("pole_tol") = 1e-10);
  m.def("dw_dDelta", &dw_dDelta, py::arg("q"), py::arg("pole_tol") = 1e-10);

  py::enum_<PointClass>(m, "PointClass")
      .value("simple", PointClass::simple)
      .value("double_point", PointClass::double_point);

  py::class_<SpectrumPoint>(m, "SpectrumPoint")
      .def_readonly("lam", &SpectrumPoint::lambda)
      .def_readonly("antiperiodic", &SpectrumPoint::antiperiodic)
      .def_readonly("cls", &SpectrumPoint::cls)
      .def_readonly("delta_prime", &SpectrumPoint::delta_prime);

  py::class_<Gap>(m, "Gap")
      .def_readonly("lo", &Gap::lo)
      .def_readonly("hi", &Gap::hi);

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("periodic_points", &SpectrumReport::periodic_points)
      .def_readonly("antiperiodic_points", &SpectrumReport::antiperiodic_points)
      .def_readonly("gaps", &SpectrumReport::gaps)
      .def_readonly("unresolved", &SpectrumReport::unresolved)
      .def("all_points_sorted", &SpectrumReport::all_points_sorted);

  m.def("periodic_spectrum", &periodic_spectrum, py::arg("pot"), py::arg("lo"),
        py::arg("hi"), py::arg("resolution") = 16,
        py::arg("opts") = IntegratorOptions{},
        py::arg("class_tol_base") = 1e-6);

  m.def("quasimomentum", &quasimomentum, py::arg("pot"), py::arg("q"),
        py::arg("path") = std::vector<cplx>{},
        py::arg("opts") = IntegratorOptions{});
  m.def("hadamard_residual", &hadamard_residual, py::arg("pot"), py::arg("lam"),
        py::arg("truncation_n"), py::arg("opts") = IntegratorOptions{});

  py::class_<DivisorPoint>(m, "DivisorPoint")
      .def_readonly("point", &DivisorPoint::point)
      .def_readonly("gap_index", &DivisorPoint::gap_index)
      .def_readonly("degenerate", &DivisorPoint::degenerate)
      .def_readonly("residual", &DivisorPoint::residual);

  m.def("divisor", &divisor, py::arg("pot"), py::arg("y"), py::arg("report"),
        py::arg("opts") = IntegratorOptions{}, py::arg("root_tol") = 1e-8);

  py::class_<WeylValue>(m, "WeylValue")
      .def_readonly("q", &WeylValue::q)
      .def_readonly("x", &WeylValue::x)
      .def_readonly("a", &WeylValue::a)
      .def_readonly("consistency_residual", &WeylValue::consistency_residual)
      .def_property_readonly(
          "value", [](const WeylValue& v) { return v.weyl.value(); })
      .def_property_readonly(
          "is_infinite", [](const WeylValue& v) { return v.weyl.is_infinite(); });

  m.def("weyl_function", &weyl_function, py::arg("pot"), py::arg("x"),
        py::arg("q"), py::arg("opts") = IntegratorOptions{});
  m.def("floquet_solution", &floquet_solution, py::arg("pot"), py::arg("x"),
        py::arg("y"), py::arg("q"), py::arg("opts") = IntegratorOptions{});
  m.def("wronskian_W", &wronskian_W, py::arg("pot"), py::arg("y"), py::arg("q"),
        py::arg("opts") = IntegratorOptions{});
  m.def("xi", &xi, py::arg("pot"), py::arg("y"), py::arg("q"),
        py::arg("opts") = IntegratorOptions{});
  m.def("recover_field", &recover_field, py::arg("pot"), py::arg("x"),
        py::arg("tau"), py::arg("opts") = IntegratorOptions{});

  py::class_<OneGapCurve>(m, "OneGapCurve")
      .def(py::init<cplx, int, double>(), py::arg("amplitude"), py::arg("mode"),
           py::arg("half_period"))
      .def_static("from_potential", &OneGapCurve::from_potential)
      .def_property_readonly("alpha", &OneGapCurve::alpha)
      .def_property_readonly("eta", &OneGapCurve::eta)
      .def_property_readonly("half_period", &OneGapCurve::half_period)
      .def("potential", &OneGapCurve::potential)
      .def("uniformize", &OneGapCurve::uniformize, py::arg("z"))
      .def("eps_pm", &OneGapCurve::eps_pm, py::arg("z"))
      .def("eps_a", &OneGapCurve::eps_a, py::arg("z"))
      .def("quasimomentum_z", &OneGapCurve::quasimomentum_z, py::arg("z"))
      .def("multiplier", &OneGapCurve::multiplier, py::arg("z"))
      .def("discriminant_closed", &OneGapCurve::discriminant_closed,
           py::arg("z"))
      .def("z_gamma_closed", &OneGapCurve::z_gamma_closed, py::arg("x"))
      .def("closed_weyl",
           py::overload_cast<double, cplx>(&OneGapCurve::closed_weyl,
                                           py::const_),
           py::arg("x"), py::arg("z"))
      .def("z_from_point", &OneGapCurve::z_from_point, py::arg("q"),
           py::arg("match_tol") = 1e-5);

  py::class_<IdentityCheck>(m, "IdentityCheck")
      .def_readonly("lhs", &IdentityCheck::lhs)
      .def_readonly("rhs", &IdentityCheck::rhs)
      .def_readonly("residual", &IdentityCheck::residual);

  py::class_<RpbReport>(m, "RpbReport")
      .def_readonly("checks", &RpbReport::checks)
      .def_readonly("vanishing", &RpbReport::vanishing)
      .def_readonly("max_residual", &RpbReport::max_residual);

  py::class_<PopdReport>(m, "PopdReport")
      .def_readonly("ww", &PopdReport::ww)
      .def_readonly("xixi", &PopdReport::xixi);

  py::class_<CanonicalReport>(m, "CanonicalReport")
      .def_readonly("mu", &CanonicalReport::mu)
      .def_readonly("lambda_lambda", &CanonicalReport::lambda_lambda)
      .def_readonly("p_p", &CanonicalReport::p_p)
      .def_readonly("p_lambda", &CanonicalReport::p_lambda)
      .def_readonly("max_residual", &CanonicalReport::max_residual)
      .def_readonly("p_lambda_diagonal", &CanonicalReport::p_lambda_diagonal)
      .def_readonly("max_residual_scaled",
                    &CanonicalReport::max_residual_scaled);

  py::class_<FieldBracketReport>(m, "FieldBracketReport")
      .def_readonly("r_pp", &FieldBracketReport::r_pp)
      .def_readonly("r_cross", &FieldBracketReport::r_cross)
      .def_readonly("r_cross_over_f", &FieldBracketReport::r_cross_over_f)
      .def_readonly("dist_to_i", &FieldBracketReport::dist_to_i)
      .def_readonly("dist_to_2i", &FieldBracketReport::dist_to_2i);

  m.def("verify_quartic_identity", &verify_quartic_identity, py::arg("pot"),
        py::arg("lam"), py::arg("mu"), py::arg("x0"), py::arg("x1"),
        py::arg("samples") = 24, py::arg("fd_h") = 1e-5,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_rpb", &verify_rpb, py::arg("pot"), py::arg("lam"),
        py::arg("mu"), py::arg("x"), py::arg("grid") = 512,
        py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_deformed_ah", &verify_deformed_ah, py::arg("pot"),
        py::arg("x"), py::arg("q"), py::arg("p"), py::arg("grid") = 512,
        py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_A_bracket", &verify_A_bracket, py::arg("pot"), py::arg("x"),
        py::arg("q"), py::arg("p"), py::arg("grid") = 512,
        py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_popd", &verify_popd, py::arg("pot"), py::arg("x"), py::arg("q"),
        py::arg("p"), py::arg("grid") = 512,
        py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_canonical", &verify_canonical, py::arg("pot"), py::arg("y"),
        py::arg("spectrum"), py::arg("min_gap_width") = 1e-3,
        py::arg("grid") = 512, py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});
  m.def("verify_field_brackets", &verify_field_brackets, py::arg("pot"),
        py::arg("z"), py::arg("f"), py::arg("tau"), py::arg("grid") = 512,
        py::arg("quad") = Quadrature::simpson,
        py::arg("opts") = IntegratorOptions{});

  py::class_<TodaState>(m, "TodaState")
      .def(py::init([](std::vector<double> q, std::vector<double> p) {
             return TodaState{std::move(q), std::move(p)};
           }),
           py::arg("q"), py::arg("p"))
      .def_readwrite("q", &TodaState::q)
      .def_readwrite("p", &TodaState::p)
      .def("size", &TodaState::size);

  py::class_<TodaSpectralData>(m, "TodaSpectralData")
      .def_readonly("eigenvalues", &TodaSpectralData::eigenvalues)
      .def_readonly("residues", &TodaSpectralData::residues);

  py::class_<TodaMahCheck>(m, "TodaMahCheck")
      .def_readonly("lhs", &TodaMahCheck::lhs)
      .def_readonly("rhs", &TodaMahCheck::rhs)
      .def_readonly("residual", &TodaMahCheck::residual);

  m.def("jacobi_matrix", &jacobi_matrix, py::arg("state"));
  m.def("toda_spectral_data", &toda_spectral_data, py::arg("state"));
  m.def("toda_weyl", &toda_weyl, py::arg("data"), py::arg("lam"));
  m.def("toda_weyl_resolvent", &toda_weyl_resolvent, py::arg("state"),
        py::arg("lam"));
  m.def("toda_bracket", &toda_bracket, py::arg("state"), py::arg("f"),
        py::arg("g"), py::arg("fd_step") = 1e-6);
  m.def("toda_verify_mah", &verify_mah, py::arg("state"), py::arg("lam"),
        py::arg("mu"), py::arg("fd_step") = 1e-6);
  m.def("toda_flow_step", &toda_flow_step, py::arg("state"), py::arg("dt"),
        py::arg("steps"));
}
