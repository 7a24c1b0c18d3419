#include "eigcorr/correction.hpp"
#include "eigcorr/error.hpp"
#include "eigcorr/experiment.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace eigcorr;

namespace {

py::array_t<double> to_array(const Vector& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict csr_dict(const CsrMatrix& m) {
  py::dict d;
  d["shape"] = py::make_tuple(m.n_rows(), m.n_cols());
  d["indptr"] = py::array_t<Index>(static_cast<py::ssize_t>(m.row_offsets().size()), m.row_offsets().data());
  d["indices"] = py::array_t<Index>(static_cast<py::ssize_t>(m.col_indices().size()), m.col_indices().data());
  d["data"] = py::array_t<double>(static_cast<py::ssize_t>(m.values().size()), m.values().data());
  return d;
}

py::object optional_value(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

py::list trace_list(const CorrectionTrace& trace) {
  py::list out;
  for (const LevelRecord& r : trace.records) {
    py::dict d;
    d["level"] = r.level;
    d["stage"] = r.stage;
    d["order"] = r.order;
    d["h"] = r.h;
    d["dofs"] = r.dofs;
    d["lambda"] = r.lambda;
    d["err_lambda"] = optional_value(r.err_lambda);
    d["err_energy"] = optional_value(r.err_energy);
    d["err_l2"] = optional_value(r.err_l2);
    d["cg_iterations"] = r.cg_iterations;
    out.append(d);
  }
  return out;
}

py::list rows_list(const RunReport& report) {
  py::list out;
  for (const ConvergenceRow& r : report.rows) {
    py::dict d;
    d["level"] = r.level;
    d["h_or_p"] = r.h_or_p;
    d["dofs"] = r.dofs;
    d["lambda"] = r.lambda;
    d["err_lambda"] = optional_value(r.err_lambda);
    d["err_energy"] = optional_value(r.err_energy);
    d["err_l2"] = optional_value(r.err_l2);
    d["rate_lambda"] = optional_value(r.rate_lambda);
    d["rate_energy"] = optional_value(r.rate_energy);
    d["wall_ms"] = r.wall_ms;
    out.append(d);
  }
  return out;
}

RunConfig make_config(const std::string& way, const std::vector<int>& m, int levels, int index, int order,
                      double tol, const std::string& diffusion, const std::string& weight) {
  RunConfig c;
  c.way = parse_way(way);
  c.m = m;
  c.levels = levels;
  c.index = index;
  c.order = order;
  c.tol = tol;
  c.diffusion = diffusion;
  c.weight = weight;
  return c;
}

Hierarchy build(const std::string& way, int m, int levels, int order) {
  return Hierarchy::build(parse_way(way), m, levels, order);
}

} // namespace

PYBIND11_MODULE(_eigcorr, mod) {
  mod.doc() = "Finite element eigensolver with multi-level correction";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", base.ptr());
  py::register_exception<UnsupportedLadder>(mod, "UnsupportedLadder", base.ptr());
  py::register_exception<InvalidArgument>(mod, "InvalidArgument", base.ptr());
  py::register_exception<NestingViolation>(mod, "NestingViolation", base.ptr());
  py::register_exception<IterationLimit>(mod, "IterationLimit", base.ptr());
  py::register_exception<ParseError>(mod, "ParseError", base.ptr());

  mod.def(
      "unit_square_mesh",
      [](int m, int refinements) {
        const TriMesh mesh = refine_regular(unit_square_mesh(m), refinements);
        py::array_t<double> xy({static_cast<py::ssize_t>(mesh.n_vertices()), py::ssize_t{2}});
        auto v = xy.mutable_unchecked<2>();
        for (Index i = 0; i < mesh.n_vertices(); ++i) {
          v(i, 0) = mesh.vertices[i].x;
          v(i, 1) = mesh.vertices[i].y;
        }
        py::array_t<Index> tri({static_cast<py::ssize_t>(mesh.n_triangles()), py::ssize_t{3}});
        auto t = tri.mutable_unchecked<2>();
        for (Index k = 0; k < mesh.n_triangles(); ++k) {
          for (int j = 0; j < 3; ++j) {
            t(k, j) = mesh.triangles[k][j];
          }
        }
        return py::make_tuple(xy, tri);
      },
      py::arg("m"), py::arg("refinements") = 0,
      "Vertices (n, 2) and counterclockwise triangles (t, 3) of the structured unit-square mesh.");

  mod.def(
      "laplace_pencil",
      [](int m, int order) {
        const FeSpace s(unit_square_mesh(m), order);
        py::dict d;
        d["stiffness"] = csr_dict(apply_dirichlet(assemble_stiffness(s), s));
        d["mass"] = csr_dict(apply_dirichlet(assemble_mass(s), s));
        return d;
      },
      py::arg("m"), py::arg("order") = 1,
      "Dirichlet-reduced stiffness and mass matrices as CSR arrays (indptr, indices, data).");

  mod.def(
      "smallest_eigenvalues",
      [](int m, int order, int k) {
        const FeSpace s(unit_square_mesh(m), order);
        const auto pairs = smallest_eigenpairs(apply_dirichlet(assemble_stiffness(s), s),
                                               apply_dirichlet(assemble_mass(s), s), k);
        std::vector<double> out;
        for (const auto& p : pairs) {
          out.push_back(p.value);
        }
        return out;
      },
      py::arg("m"), py::arg("order") = 1, py::arg("k") = 1);

  mod.def(
      "multi_level_solve",
      [](const std::string& way, int m, int levels, int order, int index) {
        const Hierarchy h = build(way, m, levels, order);
        const ExactEigenpair ref = unit_square_reference(index);
        const MultiLevelResult r = multi_level_solve(h, index, {}, &ref);
        return py::make_tuple(r.pair.value, to_array(r.pair.vector), trace_list(r.trace));
      },
      py::arg("way") = "multigrid", py::arg("m") = 4, py::arg("levels") = 2, py::arg("order") = 1,
      py::arg("index") = 1, "Returns (lambda, eigenvector over free dofs, per-level trace).");

  mod.def(
      "two_grid_solve",
      [](const std::string& way, int m, int levels, int order, int index) {
        const Hierarchy h = build(way, m, levels, order);
        const ExactEigenpair ref = unit_square_reference(index);
        const MultiLevelResult r = two_grid_solve(h, index, {}, &ref);
        return py::make_tuple(r.pair.value, to_array(r.pair.vector), trace_list(r.trace));
      },
      py::arg("way") = "multigrid", py::arg("m") = 4, py::arg("levels") = 2, py::arg("order") = 1,
      py::arg("index") = 1);

  mod.def(
      "rayleigh_expansion_residual",
      [](int m, int order, py::array_t<double, py::array::c_style | py::array::forcecast> psi) {
        const Hierarchy h = build("multigrid", m, 1, order);
        const EigenPair p = solve_coarse(h, 1);
        const std::vector<double> x(psi.data(), psi.data() + psi.size());
        return rayleigh_expansion_residual(p.value, p.vector, x, h.coarse().stiffness, h.coarse().mass);
      },
      py::arg("m"), py::arg("order"), py::arg("psi"),
      "Expansion residual for psi against the first eigenpair of the unit-square pencil.");

  mod.def("analytic_eigenvalue", [](int j, int k) { return analytic_reference(j, k).lambda; },
          py::arg("j") = 1, py::arg("k") = 1);

  auto runner = [](RunReport (*fn)(const RunConfig&)) {
    return [fn](const std::string& way, const std::vector<int>& m, int levels, int index, int order,
                double tol, const std::string& diffusion, const std::string& weight) {
      return rows_list(fn(make_config(way, m, levels, index, order, tol, diffusion, weight)));
    };
  };
  const char* run_doc = "Convergence rows as dicts keyed by the CSV columns.";
  for (auto [name, fn] : {std::pair{"run_direct", &run_direct}, std::pair{"run_two_grid", &run_two_grid},
                          std::pair{"run_multilevel", &run_multilevel}}) {
    mod.def(name, runner(fn), py::arg("way") = "multigrid", py::arg("m") = std::vector<int>{8},
            py::arg("levels") = 2, py::arg("index") = 1, py::arg("order") = 1, py::arg("tol") = 1e-10,
            py::arg("diffusion") = "1", py::arg("weight") = "1", run_doc);
  }
}
