// Global matrix assembly: exact and lumped mass, mixed derivative pairing,
// stiffness, the discrete exterior derivative in DOF coordinates, harmonic
// forms, the global trimmed interpolation, and the discrete coderivative
// with its locality report.

#ifndef QTILDE_ASSEMBLY_HPP
#define QTILDE_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>

#include "qtilde/mesh.hpp"

namespace qtilde {

using SpMat = Eigen::SparseMatrix<double>;

enum class MassMode { Exact, Lumped };

// Per-active-cell SPD matrix acting on the component space (sigma lex
// order).  An empty list means the identity everywhere.
struct CoefficientField {
  std::vector<Eigen::MatrixXd> per_cell;

  bool is_identity() const { return per_cell.empty(); }
};

CoefficientField constant_coefficient(const StructuredCubicalMesh& mesh,
                                      const Eigen::MatrixXd& K);
// Random SPD matrices with eigenvalues in [1, 1 + spread], seeded.
CoefficientField random_spd_coefficient(const StructuredCubicalMesh& mesh, int k,
                                        unsigned seed, double spread = 4.0);

// Throws std::domain_error unless every matrix is symmetric positive
// definite of the expected size.
void validate_spd(const CoefficientField& K, int comps);

// Reference cross-component Gram matrices of the nodal dual basis:
// result[s][s'](i, j) = int_That psi_i,(sigma_s) psi_j,(sigma_s').
// Computed exactly in rational arithmetic, returned in double.
const std::vector<std::vector<Eigen::MatrixXd>>& reference_dual_gram(int n, int k,
                                                                     int r);

// Mass matrix on V^k in the global nodal basis.  Lumped mode uses the
// Gauss-Lobatto quadrature product, which is block diagonal by geometric
// node (diagonal when K is the identity).
SpMat assemble_mass(const StructuredCubicalMesh& mesh, int k, int r, MassMode mode,
                    const CoefficientField& K = {});

// B(i, j) = <d tau_i, v_j> for tau_i in V^{k-1}, v_j in V^k (exact).
SpMat assemble_mixed(const StructuredCubicalMesh& mesh, int k, int r);

// S(i, j) = <d u_i, d u_j> on V^k (exact).
SpMat assemble_stiffness(const StructuredCubicalMesh& mesh, int k, int r);

// Coefficients of the exterior derivative: maps V^k dof vectors to V^{k+1}
// dof vectors (d of a conforming form is conforming, so overlapping element
// contributions agree).
SpMat derivative_matrix(const StructuredCubicalMesh& mesh, int k, int r);

// Global trimmed interpolation in dof coordinates: Pi_h maps V^k onto the
// conforming trimmed subspace, cell by cell (shared dof values agree).
SpMat pi_h_global(const StructuredCubicalMesh& mesh, int k, int r);

// Columns span the discrete harmonic space: trimmed-subspace fields v with
// dv = 0 and <v, d tau> = 0 for all tau in V^{k-1}.  Restricting to the
// trimmed subcomplex keeps the dimension equal to the Betti number; the
// closed enrichment functions of the full space would inflate it.
// Orthonormal in the exact L2 inner product.
Eigen::MatrixXd harmonic_basis(const StructuredCubicalMesh& mesh, int k, int r);

// Kernel of the full constraint operator on V^k: {v : dv = 0, <v, d tau> = 0}
// without the trimmed restriction.  This is the stabilization space the
// saddle-point solver needs; it contains harmonic_basis plus closed
// enrichment modes.  M-orthonormal columns.
Eigen::MatrixXd closed_coclosed_basis(const StructuredCubicalMesh& mesh, int k, int r);

// Per-cell trimmed interpolation in dual coordinates: takes the local dof
// values of u on a cell to the reference Qminus basis coefficients of the
// pullback of Pi_h u.  Identical for all (congruent) cells.
Eigen::MatrixXd hat_pi_dual_matrix(int n, int k, int r);

// sigma_h = M(mode)^{-1} B u_h as a dense operator (desk scale).
Eigen::MatrixXd coderivative_operator(const StructuredCubicalMesh& mesh, int k, int r,
                                      MassMode mode, const CoefficientField& K = {});

struct LocalityReport {
  bool local = false;          // every column confined to its node's elements
  std::size_t columns = 0;     // columns inspected
  std::size_t violations = 0;  // columns with support outside the patch
  double worst_ratio = 0.0;    // largest outside-entry / column max
};

LocalityReport coderivative_locality(const StructuredCubicalMesh& mesh, int k, int r,
                                     MassMode mode, const CoefficientField& K = {},
                                     double tol = 1e-12);

// Coordinate-format text export (row col value per line) for debugging.
void write_coo(const SpMat& a, std::ostream& out);

}  // namespace qtilde

#endif
