// Mixed Hodge Laplace solver: saddle-point assembly with the harmonic
// stabilization block, manufactured convergence cases with a boundary
// compatibility gate, and L2 error evaluation against callables.

#ifndef QTILDE_SOLVER_HPP
#define QTILDE_SOLVER_HPP

#include <functional>
#include <string>

#include "qtilde/assembly.hpp"

namespace qtilde {

// Component values (sigma lex order) of a k-form field at a physical point.
using FormCallable = std::function<std::vector<double>(const std::vector<double>&)>;

FormCallable zero_field(int n, int k);

struct HodgeSolution {
  int k = 0;
  int r = 0;
  MassMode mode = MassMode::Exact;
  Eigen::VectorXd sigma;  // dof coefficients in V^{k-1}
  Eigen::VectorXd u;      // dof coefficients in V^k
  Eigen::VectorXd p;      // dof coefficients in V^k (harmonic-block component)
  double residual = 0.0;  // relative linear-system residual
  std::size_t stabilization_dim = 0;
};

// Solves <sigma, tau>_(h) - <d tau, u> = 0, <d sigma, v> + <du, dv> + <p, v>
// = <f, v>, <u, q> = 0, with p and q ranging over the closed-coclosed space.
HodgeSolution solve_hodge(const StructuredCubicalMesh& mesh, int k, int r,
                          const FormCallable& f, MassMode mode,
                          const CoefficientField& K = {});

// Same, with the load functional <f, v_j> supplied directly (useful when f
// is a discrete field whose normal components jump across faces, where
// boundary-touching quadrature would sample the wrong side).
HodgeSolution solve_hodge_load(const StructuredCubicalMesh& mesh, int k, int r,
                               const Eigen::VectorXd& load, MassMode mode,
                               const CoefficientField& K = {});

// Dof coefficients of the nodal interpolation of a smooth field.
Eigen::VectorXd interpolate_form(const StructuredCubicalMesh& mesh, int k, int r,
                                 const FormCallable& field);

// || u_h - exact ||_{L2} by per-cell tensor Gauss-Lobatto of the given order.
double l2_error(const StructuredCubicalMesh& mesh, int k, int r,
                const Eigen::VectorXd& coeffs, const FormCallable& exact,
                int quad_order);

struct ManufacturedCase {
  std::string name;
  int n = 0;
  int k = 0;
  FormCallable u;       // exact k-form solution
  FormCallable sigma;   // exact (k-1)-form coderivative
  FormCallable dsigma;  // d sigma (k-form)
  FormCallable du;      // d u ((k+1)-form); empty components when k = n
  FormCallable f;       // load
  // max over boundary samples of the natural-boundary-condition residual
  std::function<double(const std::vector<double>&)> boundary_residual;
};

// Known cases: "sinsin" (n=2, k=2) and "gradcos" (n=2, k=1).
ManufacturedCase manufactured_case(const std::string& name);

// Samples the boundary residual on a grid of boundary points.
double boundary_gate(const ManufacturedCase& mc, int samples_per_side = 40);

struct ConvergenceRow {
  double h = 0.0;
  std::size_t dofs = 0;  // sigma dofs + u dofs
  double err_sigma = 0.0, err_u = 0.0, err_dsigma = 0.0, err_du = 0.0;
  double sigma_mode_diff = 0.0;  // || sigma_lumped - sigma_exactmode ||
};

struct ConvergenceTable {
  std::string case_name;
  int r = 0;
  MassMode mode = MassMode::Exact;
  std::vector<ConvergenceRow> rows;
  // least-squares slopes of log(err) vs log(h)
  double rate_sigma = 0.0, rate_u = 0.0, rate_dsigma = 0.0, rate_du = 0.0;
  double rate_sigma_diff = 0.0;
};

// Runs the case on the given mesh sizes (cells per axis).  Throws
// std::domain_error if the boundary gate fails.  Errors are reported for the
// requested mode; sigma_mode_diff always compares lumped against exact mode.
ConvergenceTable run_convergence(const std::string& case_name, int r, MassMode mode,
                                 const std::vector<int>& sizes);

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out);

}  // namespace qtilde

#endif
