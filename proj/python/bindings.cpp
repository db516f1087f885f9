#include <cmath>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contlim/structured.hpp"
#include "contlim/gcmps.hpp"
#include "contlim/io.hpp"

namespace py = pybind11;
using namespace contlim;

namespace {

SuperOp superop(const CMatrix& m) {
  const Index dim = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
  if (m.rows() != m.cols() || dim * dim != m.rows()) throw ShapeError("superoperator must be d^2 x d^2");
  return {dim, m};
}

std::optional<CMatrix> matrix_of(const std::optional<SuperOp>& e) {
  if (!e) return std::nullopt;
  return e->matrix;
}

std::optional<CMatrix> matrix_of(const std::optional<LiouvillianMatrix>& l) {
  if (!l) return std::nullopt;
  return l->matrix;
}

}  // namespace

PYBIND11_MODULE(_contlim, m) {
  m.doc() = "Continuum limits of matrix product states";
  py::register_exception<Error>(m, "ContlimError", PyExc_ValueError);

  py::class_<MpsTensor>(m, "MpsTensor")
      .def(py::init([](std::vector<CMatrix> matrices, double spacing) {
             if (matrices.empty()) throw ShapeError("MpsTensor: no matrices");
             MpsTensor t{static_cast<Index>(matrices.size()), matrices.front().rows(), std::move(matrices), spacing};
             t.validate();
             return t;
           }),
           py::arg("matrices"), py::arg("spacing") = 1.0)
      .def_readonly("d", &MpsTensor::d)
      .def_readonly("D", &MpsTensor::D)
      .def_readonly("matrices", &MpsTensor::matrices)
      .def_readonly("spacing", &MpsTensor::spacing);

  py::class_<DivisibilityVerdict>(m, "Verdict")
      .def_property_readonly("status", [](const DivisibilityVerdict& v) { return std::string(to_string(v.status)); })
      .def_readonly("spacing", &DivisibilityVerdict::spacing)
      .def_property_readonly("projector", [](const DivisibilityVerdict& v) { return matrix_of(v.projector); })
      .def_property_readonly("generator", [](const DivisibilityVerdict& v) { return matrix_of(v.generator); })
      .def_property_readonly("coarse_power",
                             [](const DivisibilityVerdict& v) -> std::optional<int> {
                               if (!v.coarse) return std::nullopt;
                               return v.coarse->power;
                             })
      .def_readonly("diagnostics", &DivisibilityVerdict::diagnostics)
      .def_readonly("completed_by_search", &DivisibilityVerdict::completed_by_search)
      .def("to_json", [](const DivisibilityVerdict& v) { return to_json(v).dump(); });

  py::class_<Lindblad>(m, "Lindblad")
      .def(py::init([](const CMatrix& h, std::vector<CMatrix> jumps) {
             Lindblad l{h.rows(), h, std::move(jumps)};
             l.validate();
             return l;
           }),
           py::arg("hamiltonian"), py::arg("jumps"))
      .def_readonly("dim", &Lindblad::dim)
      .def_readonly("hamiltonian", &Lindblad::hamiltonian)
      .def_readonly("jumps", &Lindblad::jumps)
      .def("liouvillian", [](const Lindblad& l) { return liouvillian_matrix(l).matrix; });

  py::class_<ProjectorBlock>(m, "ProjectorBlock")
      .def_readonly("Dk", &ProjectorBlock::dk)
      .def_readonly("mk", &ProjectorBlock::mk)
      .def_readonly("sigma", &ProjectorBlock::sigma);

  py::class_<ProjectorCanonicalForm>(m, "CanonicalForm")
      .def_readonly("dim", &ProjectorCanonicalForm::dim)
      .def_readonly("U", &ProjectorCanonicalForm::basis_change)
      .def_readonly("d0", &ProjectorCanonicalForm::d0)
      .def_readonly("blocks", &ProjectorCanonicalForm::blocks);

  py::class_<GeneralizedCmps>(m, "GeneralizedCmps")
      .def_readonly("K", &GeneralizedCmps::ancilla_dim)
      .def_readonly("D", &GeneralizedCmps::dim)
      .def_readonly("boundary", &GeneralizedCmps::boundary)
      .def_readonly("hamiltonian", &GeneralizedCmps::hamiltonian)
      .def_readonly("jumps", &GeneralizedCmps::jumps)
      .def_readwrite("statistics", &GeneralizedCmps::statistics)
      .def("transfer", [](const GeneralizedCmps& g, double length) { return transfer(g, length).matrix; }, py::arg("length"))
      .def("norm_squared", &norm_squared, py::arg("length"))
      .def("density", &density, py::arg("length"), py::arg("alpha"), py::arg("x"))
      .def("correlation", &correlation, py::arg("length"), py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("y"))
      .def("to_json", [](const GeneralizedCmps& g) { return to_json(g).dump(); });

  m.def("presets", &presets::names);
  m.def("preset", &presets::by_name, py::arg("name"), py::arg("gamma") = 1.0, py::arg("spacing") = 1.0);
  m.def("transfer_matrix", [](const MpsTensor& t) { return transfer_matrix(t).matrix; });
  m.def("kraus_to_superop", [](std::vector<CMatrix> kraus) {
    if (kraus.empty()) throw ShapeError("no Kraus operators");
    return kraus_to_superop({kraus.front().rows(), std::move(kraus)}).matrix;
  });
  m.def(
      "is_cptp", [](const CMatrix& e, double tol) { return is_cptp(superop(e), tol).ok(); }, py::arg("e"),
      py::arg("tol") = kDefaultTol);
  m.def(
      "is_infinitely_divisible", [](const CMatrix& e, double a, double tol) { return is_infinitely_divisible(superop(e), a, tol); },
      py::arg("e"), py::arg("spacing") = 1.0, py::arg("tol") = kDefaultTol);
  m.def(
      "analyze", [](const CMatrix& e, double a, double tol, int p_max) { return analyze(superop(e), a, tol, p_max); },
      py::arg("e"), py::arg("spacing") = 1.0, py::arg("tol") = kDefaultTol, py::arg("p_max") = 4);
  m.def("has_continuum_limit", &has_continuum_limit, py::arg("tensor"), py::arg("tol") = kDefaultTol);
  m.def("expm", [](const CMatrix& x) { return expm(x); });
  m.def(
      "canonical_form", [](const CMatrix& p, double tol, std::uint64_t seed) { return canonical_form(superop(p), tol, seed); },
      py::arg("p"), py::arg("tol") = kDefaultTol, py::arg("seed") = 0);
  m.def("build_projector", [](const ProjectorCanonicalForm& cf) { return build_projector(cf).matrix; });
  m.def("thermo_generator", &thermo_liouvillian);
  m.def("gcmps_from_mps", &from_mps, py::arg("tensor"), py::arg("tol") = kDefaultTol);
  m.def("gcmps_from_verdict", &from_verdict, py::arg("verdict"), py::arg("tol") = kDefaultTol);
  m.def(
      "fuzz_structured",
      [](std::uint64_t seed, int trials, bool maximally_mixed) {
        FuzzOptions opts;
        opts.maximally_mixed_sigma = maximally_mixed;
        const FuzzSummary s = fuzz_agreement(seed, trials, kDefaultTol, opts);
        py::dict out;
        out["trials"] = s.trials;
        out["true_instances"] = s.true_instances;
        out["disagreements"] = s.disagreements.size();
        return out;
      },
      py::arg("seed"), py::arg("trials"), py::arg("maximally_mixed") = false);
}
