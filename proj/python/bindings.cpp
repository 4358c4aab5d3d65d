#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cloakspec/bessel.hpp"
#include "cloakspec/cli.hpp"
#include "cloakspec/cloak.hpp"
#include "cloakspec/dtn.hpp"
#include "cloakspec/errors.hpp"
#include "cloakspec/mesh.hpp"
#include "cloakspec/spectra.hpp"
#include "cloakspec/xform.hpp"

namespace py = pybind11;
using namespace cloakspec;

namespace {

Eigen::MatrixX2d nodes_of(const Mesh& m) {
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(m.num_nodes()), 2);
  for (std::size_t i = 0; i < m.num_nodes(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.nodes[i].transpose();
  return out;
}

Eigen::MatrixX3i triangles_of(const Mesh& m) {
  Eigen::MatrixX3i out(static_cast<Eigen::Index>(m.num_triangles()), 3);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) out(static_cast<Eigen::Index>(t), k) = m.triangles[t][k];
  }
  return out;
}

py::dict eigen_dict(const EigenResult& r) {
  py::dict d;
  d["values"] = r.values;
  d["omegas"] = omegas_of(r.values);
  d["residuals"] = r.residuals;
  d["clusters"] = r.clusters;
  d["zero_index"] = r.zero_index ? py::object(py::int_(*r.zero_index)) : py::object(py::none());
  d["vectors"] = r.node_vectors;
  return d;
}

py::dict record_dict(const SweepRecord& r) {
  py::dict d;
  d["epsilon"] = r.epsilon;
  d["dtn_error"] = r.dtn_error_value;
  d["dofs"] = r.dofs;
  d["omega"] = r.omega;
  d["modes"] = r.modes;
  d["factor_seconds"] = r.factor_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transformation-optics cloaking and spectral toolkit";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<AssemblyError>(m, "AssemblyError", base.ptr());
  py::register_exception<ResonanceError>(m, "ResonanceError", base.ptr());
  py::register_exception<InconsistencyError>(m, "InconsistencyError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
  py::register_exception<InternalError>(m, "InternalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("bessel_j", &bessel_j, py::arg("m"), py::arg("x"));
  m.def("bessel_j_prime", &bessel_j_prime, py::arg("m"), py::arg("x"));
  m.def("bessel_root", &bessel_root, py::arg("m"), py::arg("k"));

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("nodes", &nodes_of)
      .def_property_readonly("triangles", &triangles_of)
      .def_readonly("outer_boundary", &Mesh::outer_boundary)
      .def_readonly("inner_boundary", &Mesh::inner_boundary)
      .def_readonly("region_tag", &Mesh::region_tag)
      .def_property_readonly("num_nodes", &Mesh::num_nodes)
      .def_property_readonly("num_triangles", &Mesh::num_triangles)
      .def("area", &Mesh::area)
      .def("max_edge_length", &Mesh::max_edge_length)
      .def("min_angle_degrees", &Mesh::min_angle_degrees)
      .def("euler_characteristic", &Mesh::euler_characteristic)
      .def("to_json", [](const Mesh& mesh) { return mesh_to_json(mesh); })
      .def_static("from_json", &mesh_from_json, py::arg("text"));

  m.def("make_disk", &make_disk, py::arg("radius"), py::arg("h"), py::arg("interface_radius") = py::none());
  m.def("make_annulus", &make_annulus, py::arg("inner_radius"), py::arg("outer_radius"), py::arg("h"));
  m.def("make_ellipse", &make_ellipse, py::arg("a"), py::arg("b"), py::arg("h"));
  m.def("refine", &refine, py::arg("mesh"));
  m.def("boundary_angles", &boundary_angles, py::arg("mesh"));
  m.def("validate", &validate, py::arg("mesh"));

  py::class_<DiffeoSpec>(m, "Diffeo")
      .def_readonly("name", &DiffeoSpec::name)
      .def("map", [](const DiffeoSpec& f, const Vec2& x) { return Vec2(f.map(x)); }, py::arg("x"))
      .def("inverse", [](const DiffeoSpec& f, const Vec2& y) { return Vec2(f.inverse(y)); }, py::arg("y"))
      .def("jacobian", [](const DiffeoSpec& f, const Vec2& x) { return Mat2(f.jacobian(x)); }, py::arg("x"));
  m.def("diffeo", &diffeo_from_name, py::arg("name"),
        "identity | cloak | regcloak:<eps> | inversion | bump:<t>:<seed>");
  m.def("compose", &compose, py::arg("g"), py::arg("f"));
  m.def("dilate_conjugate", &dilate_conjugate, py::arg("f"), py::arg("s"));

  py::class_<MaterialField>(m, "Medium")
      .def("g", [](const MaterialField& f, const Vec2& y) { return Mat2(f.g(y)); }, py::arg("y"))
      .def("q", [](const MaterialField& f, const Vec2& y) { return f.q(y); }, py::arg("y"))
      .def_readonly("lower_ellipticity", &MaterialField::lower_ellipticity)
      .def_readonly("upper_ellipticity", &MaterialField::upper_ellipticity);
  m.def("isotropic_medium", &isotropic_medium, py::arg("g_scale") = 1.0, py::arg("q") = 1.0);
  m.def("diagonal_medium", &diagonal_medium, py::arg("gxx"), py::arg("gyy"), py::arg("q"));
  m.def("laplace_medium", &laplace_medium);
  m.def("push_forward", &push_forward, py::arg("f"), py::arg("medium"));
  m.def("cloak_shell_medium", &cloak_shell_medium, py::arg("epsilon"));

  py::class_<DtNMatrix>(m, "DtNMatrix")
      .def_readonly("omega", &DtNMatrix::omega)
      .def_readonly("modes", &DtNMatrix::modes)
      .def_readonly("radius", &DtNMatrix::radius)
      .def_readonly("entries", &DtNMatrix::entries)
      .def("to_json", [](const DtNMatrix& d) { return dtn_to_json(d); });
  m.def(
      "dtn_matrix",
      [](const Mesh& mesh, const std::vector<MaterialField>& media, double omega, int modes) {
        return dtn_matrix(mesh, media, omega, modes);
      },
      py::arg("mesh"), py::arg("media"), py::arg("omega"), py::arg("modes"),
      "media: one medium, or one per region tag");
  m.def("dtn_free_analytic", &dtn_free_analytic, py::arg("omega"), py::arg("modes"), py::arg("radius"));
  m.def("dtn_error", &dtn_error, py::arg("a"), py::arg("b"));

  m.def(
      "schiffer_scan",
      [](const Mesh& mesh, const MaterialField& medium, double lambda_max, double tol) {
        const SchifferReport r = schiffer_scan(mesh, medium, lambda_max, tol);
        py::list cands;
        for (const auto& c : r.candidates) {
          py::dict d;
          d["lambda"] = c.lambda;
          d["boundary_flatness"] = c.boundary_flatness;
          d["mode_index"] = c.mode_index;
          cands.append(d);
        }
        py::dict d = eigen_dict(r.spectrum);
        d["flatness"] = r.flatness;
        d["candidates"] = cands;
        return d;
      },
      py::arg("mesh"), py::arg("medium"), py::arg("lambda_max") = 40.0, py::arg("flatness_tol") = 1e-2);
  m.def(
      "resonance_eigs",
      [](const Mesh& mesh, const MaterialField& medium, int count) {
        return eigen_dict(resonance_eigs(mesh, medium, count));
      },
      py::arg("mesh"), py::arg("medium"), py::arg("count"));
  m.def(
      "ite_eigs",
      [](const Mesh& mesh, const MaterialField& target, int count) {
        return eigen_dict(ite_eigs(mesh, reduced_exterior_config(target), count));
      },
      py::arg("mesh"), py::arg("target"), py::arg("count"),
      "transmission eigenvalues of the Laplacian coupled to `target` by v = w, dv/dn + conormal w = 0");
  m.def("ite_disk_oracle", &ite_disk_oracle, py::arg("q"), py::arg("m_max"), py::arg("k_max"));
  m.def("resonance_disk_oracle", &resonance_disk_oracle, py::arg("q"), py::arg("radius"), py::arg("m_max"),
        py::arg("k_max"));

  m.def(
      "cloak_sweep",
      [](const std::vector<double>& epsilons, double omega, const MaterialField& target, int modes, double h) {
        CloakExperiment base;
        base.omega = omega;
        base.target = target;
        base.modes = modes;
        base.mesh_h = h;
        py::list out;
        for (const auto& run : sweep(base, epsilons)) out.append(record_dict(run.record));
        return out;
      },
      py::arg("epsilons"), py::arg("omega") = 1.0, py::arg("target") = isotropic_medium(1.0, 1.0),
      py::arg("modes") = 8, py::arg("h") = 0.05);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "run one command-line invocation; returns (exit_code, stdout, stderr)");
}
