#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "dts/gbdt.hpp"
#include "dts/inverse.hpp"
#include "dts/kernels.hpp"
#include "dts/szego.hpp"

namespace py = pybind11;
using namespace dts;

namespace {

MomentData moments_from(Index p, const CMatrix& nu, const std::vector<CMatrix>& s) {
  MomentData m;
  m.p = p;
  m.nu = nu;
  m.s = s;
  validate_moments(m);
  return m;
}

py::dict moments_dict(const MomentData& m) {
  py::dict d;
  d["p"] = m.p;
  d["nu"] = m.nu;
  d["s"] = m.s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Discrete Dirac systems, block Toeplitz moments and Weyl functions";

  static py::exception<Error> dts_error(mod, "DtsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = dts_error;
      py::object inst = exc(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("index") = e.index() ? py::cast(*e.index()) : py::none();
      PyErr_SetObject(dts_error.ptr(), inst.ptr());
    }
  });

  py::class_<AdmissibleTriple>(mod, "AdmissibleTriple")
      .def_property_readonly("n", &AdmissibleTriple::n)
      .def_property_readonly("p", &AdmissibleTriple::p)
      .def_property_readonly("a", &AdmissibleTriple::a)
      .def_property_readonly("s0", &AdmissibleTriple::s0)
      .def_property_readonly("theta1", &AdmissibleTriple::theta1)
      .def_property_readonly("theta2", &AdmissibleTriple::theta2)
      .def_property_readonly("identity_residual", &AdmissibleTriple::identity_residual);

  mod.def("validate_triple",
          [](const CMatrix& a, const CMatrix& s0, const CMatrix& t1, const CMatrix& t2) {
            return validate_triple(a, s0, t1, t2);
          },
          py::arg("a"), py::arg("s0"), py::arg("theta1"), py::arg("theta2"));
  mod.def("example_triple", &example_triple);
  mod.def("trivial_triple", &trivial_triple, py::arg("n"), py::arg("p"));
  mod.def("random_triple",
          [](std::uint64_t seed, Index n, Index p) {
            std::mt19937_64 rng(seed);
            return random_triple(rng, n, p);
          },
          py::arg("seed"), py::arg("n"), py::arg("p"));

  mod.def("gbdt_iterate",
          [](const AdmissibleTriple& t, Index n) { return gbdt_iterate(t, n).c; },
          py::arg("triple"), py::arg("n"), "Potential blocks C_0..C_n.");
  mod.def("gbdt_moments",
          [](const AdmissibleTriple& t, Index k) { return moments_dict(gbdt_moments(t, k)); },
          py::arg("triple"), py::arg("k"), "Moments nu, s_0..s_-k.");
  mod.def("gbdt_weyl", &gbdt_weyl, py::arg("triple"), py::arg("lam"));
  mod.def("gbdt_omega",
          [](const AdmissibleTriple& t, Complex z) { return RationalWeyl(t).omega(z); },
          py::arg("triple"), py::arg("zeta"));

  py::class_<ToeplitzSystem>(mod, "ToeplitzSystem")
      .def_property_readonly("blocks", &ToeplitzSystem::blocks)
      .def_property_readonly("p", &ToeplitzSystem::p)
      .def_property_readonly("s", &ToeplitzSystem::s)
      .def_property_readonly("a", &ToeplitzSystem::a)
      .def_property_readonly("pi", &ToeplitzSystem::pi)
      .def_property_readonly("positive", &ToeplitzSystem::positive)
      .def("displacement_residual", &ToeplitzSystem::displacement_residual)
      .def("leading", &ToeplitzSystem::leading, py::arg("k"));

  mod.def("assemble",
          [](Index p, const CMatrix& nu, const std::vector<CMatrix>& s, Index n) {
            return assemble(moments_from(p, nu, s), n);
          },
          py::arg("p"), py::arg("nu"), py::arg("s"), py::arg("n"));
  mod.def("transfer_function", &transfer_function, py::arg("system"), py::arg("lam"));
  mod.def("fundamental_from_moments", &fundamental_from_moments, py::arg("system"), py::arg("lam"));

  mod.def("fundamental_solution",
          [](const std::vector<CMatrix>& c, Complex lambda, Index n) {
            return fundamental_solution(validate_potential(c), lambda, n).w;
          },
          py::arg("potential"), py::arg("lam"), py::arg("n"));
  mod.def("cd_residual",
          [](const std::vector<CMatrix>& c, Complex l, Complex m, Index n) {
            return cd_residual(validate_potential(c), l, m, n);
          },
          py::arg("potential"), py::arg("lam"), py::arg("mu"), py::arg("n"));

  mod.def("recover_potential",
          [](Index p, const CMatrix& nu, const std::vector<CMatrix>& s, Index n) {
            const auto r = recover_potential(moments_from(p, nu, s), n);
            py::dict d;
            d["potential"] = r.potential.blocks();
            d["probe_residuals"] = r.probe_residuals;
            d["unitarity_residuals"] = r.unitarity_residuals;
            d["stopped_at"] = r.stopped_at ? py::cast(*r.stopped_at) : py::none();
            d["diagnostic"] = r.diagnostic;
            return d;
          },
          py::arg("p"), py::arg("nu"), py::arg("s"), py::arg("n"));
  mod.def("weyl_to_moments",
          [](const MatrixFunction& phi, Index k, double radius, Index samples) {
            TaylorOptions o;
            o.radius = radius;
            o.samples = samples;
            const auto r = weyl_to_moments(phi, k, o);
            py::dict d = moments_dict(r.moments);
            d["aliasing_estimate"] = r.aliasing_estimate;
            return d;
          },
          py::arg("phi"), py::arg("k"), py::arg("radius") = 0.5, py::arg("samples") = 0);

  mod.def("eval_r", &eval_r, py::arg("system"), py::arg("lam"), py::arg("mu"));
  mod.def("eval_m",
          [](const ToeplitzSystem& t, Index k, Complex z, Complex x) { return eval_m(t, k, z, x).m; },
          py::arg("system"), py::arg("k"), py::arg("zeta"), py::arg("xi"));
  mod.def("weyl_disk",
          [](const ToeplitzSystem& t, Complex z) {
            const WeylDisk w = weyl_disk(t, z);
            py::dict d;
            d["lambda_l"] = w.lambda_l;
            d["lambda_r"] = w.lambda_r;
            d["center"] = w.center;
            d["near_excluded"] = w.near_excluded;
            return d;
          },
          py::arg("system"), py::arg("zeta"));

  mod.def("szego_integral", &szego_integral, py::arg("density"), py::arg("samples") = 4096);
  mod.def("semiseparable_matvec",
          [](const AdmissibleTriple& t, Index n, const CVector& x) {
            return semiseparable_matvec(semiseparable_generators(t), gbdt_moments(t, 0).s[0], n, x);
          },
          py::arg("triple"), py::arg("n"), py::arg("x"));
}
