// Python bindings for the main operations: dimension tables, verification
// suites, harmonic dimensions, single solves, and convergence studies.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "qtilde/solver.hpp"
#include "qtilde/verify.hpp"

namespace py = pybind11;
using namespace qtilde;

namespace {

MassMode parse_mode(const std::string& mode) {
  if (mode == "standard") return MassMode::Exact;
  if (mode == "lumped") return MassMode::Lumped;
  throw std::invalid_argument("mode must be standard or lumped");
}

py::list suite_to_list(const SuiteReport& rep) {
  py::list out;
  for (const auto& c : rep.checks) {
    py::dict d;
    d["name"] = c.name;
    d["pass"] = c.pass;
    d["value"] = c.value;
    d["bound"] = c.bound;
    d["detail"] = c.detail;
    out.append(d);
  }
  return out;
}

py::list run_suite(const std::string& suite, int n, int k, int r, unsigned seed) {
  if (suite == "dimensions") return suite_to_list(verify_dimensions());
  if (suite == "unisolvency") return suite_to_list(verify_unisolvency(n, k, r));
  if (suite == "unisolvency_sweep") return suite_to_list(verify_unisolvency_sweep());
  if (suite == "algebra") return suite_to_list(verify_algebra(seed));
  if (suite == "legendre") return suite_to_list(verify_legendre());
  if (suite == "conditions") return suite_to_list(verify_conditions(n, k, r));
  if (suite == "locality") return suite_to_list(verify_locality(r));
  if (suite == "harmonic") return suite_to_list(verify_harmonic());
  throw std::invalid_argument("unknown suite " + suite);
}

py::dict solve_case(const std::string& case_name, int r, const std::string& mode,
                    int cells) {
  auto mc = manufactured_case(case_name);
  auto mesh = unit_cube_mesh(mc.n, cells);
  auto sol = solve_hodge(mesh, mc.k, r, mc.f, parse_mode(mode));
  const int quad = r + 3;
  py::dict out;
  out["n"] = mc.n;
  out["k"] = mc.k;
  out["r"] = r;
  out["residual"] = sol.residual;
  out["stabilization_dim"] = sol.stabilization_dim;
  out["err_sigma"] = l2_error(mesh, mc.k - 1, r, sol.sigma, mc.sigma, quad);
  out["err_u"] = l2_error(mesh, mc.k, r, sol.u, mc.u, quad);
  return out;
}

py::dict convergence(const std::string& case_name, int r, const std::string& mode,
                     const std::vector<int>& sizes) {
  auto table = run_convergence(case_name, r, parse_mode(mode), sizes);
  py::dict out;
  py::list rows;
  for (const auto& row : table.rows) {
    py::dict d;
    d["h"] = row.h;
    d["dofs"] = row.dofs;
    d["err_sigma"] = row.err_sigma;
    d["err_u"] = row.err_u;
    d["err_dsigma"] = row.err_dsigma;
    d["err_du"] = row.err_du;
    d["sigma_mode_diff"] = row.sigma_mode_diff;
    rows.append(d);
  }
  out["rows"] = rows;
  out["rate_sigma"] = table.rate_sigma;
  out["rate_u"] = table.rate_u;
  out["rate_dsigma"] = table.rate_dsigma;
  out["rate_du"] = table.rate_du;
  out["rate_sigma_diff"] = table.rate_sigma_diff;
  return out;
}

}  // namespace

PYBIND11_MODULE(pyqtilde, m) {
  m.doc() = "Qtilde cubical finite elements: tables, verification, solves";

  m.def("dimension",
        [](int n, int k, int r) { return space_dimension(Family::Qtilde, n, k, r); },
        py::arg("n"), py::arg("k"), py::arg("r"),
        "Dimension of the Qtilde space (equals C(n,k)(r+1)^n)");

  m.def("verify_suite", &run_suite, py::arg("suite"), py::arg("n") = 2,
        py::arg("k") = 1, py::arg("r") = 1, py::arg("seed") = 2026,
        "Run a verification suite; returns a list of check dicts");

  m.def("harmonic_dimension",
        [](const std::string& mesh_json, int k, int r) {
          auto mesh = mesh_from_json(mesh_json);
          return static_cast<long>(harmonic_basis(mesh, k, r).cols());
        },
        py::arg("mesh_json"), py::arg("k"), py::arg("r"),
        "Dimension of the discrete harmonic space on a JSON-described mesh");

  m.def("solve", &solve_case, py::arg("case"), py::arg("r") = 1,
        py::arg("mode") = "standard", py::arg("cells") = 4,
        "Solve a manufactured Hodge Laplace case on a uniform unit-cube mesh");

  m.def("convergence", &convergence, py::arg("case"), py::arg("r") = 1,
        py::arg("mode") = "lumped",
        py::arg("sizes") = std::vector<int>{2, 4, 8},
        "Convergence study; returns per-level errors and fitted rates");
}
