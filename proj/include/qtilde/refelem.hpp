// Reference element on the box [-1,1]^n: moment degrees of freedom, nodal
// (tensor Gauss-Lobatto) degrees of freedom, Vandermonde matrices with
// unisolvency certification, dual bases, and the reference interpolation
// onto the trimmed space.

#ifndef QTILDE_REFELEM_HPP
#define QTILDE_REFELEM_HPP

#include <Eigen/Dense>
#include <vector>

#include "qtilde/polyform.hpp"
#include "qtilde/quadrature.hpp"
#include "qtilde/ratlinalg.hpp"
#include "qtilde/spaces.hpp"

namespace qtilde {

enum class DofKind { Moment, Nodal };

// One moment functional u -> int_f tr_f u ^ weight.
struct MomentDof {
  Face face;        // fixed labels pinned to +-1
  PolyForm weight;  // form over face.free
};

// All l-dimensional faces of [-1,1]^n in deterministic order: free label
// sets lexicographic, then fixed values counting with the first fixed label
// fastest (-1 before +1).
std::vector<Face> box_faces(int n, int l);

// Moment DOF set for the Qtilde element (weights Q_{r-2,tau} (x) Q_{r,tau*}
// per face and tau, with the Q_{-1} = empty convention) or for the trimmed
// element (weights Q_{r-1}^- of complementary degree per face).  Ordered by
// (l, face, tau, weight monomial).
std::vector<MomentDof> moment_dofs(int n, int k, int r, Family family);

Rational apply_moment_dof(const MomentDof& dof, const PolyForm& u);

struct ElementDef {
  int n = 0, k = 0, r = 0;
  Family family = Family::Qtilde;
  DofKind kind = DofKind::Moment;
  SpaceBasis shape;

  std::vector<MomentDof> dofs;  // moment kind
  TensorNodes nodes;            // nodal kind

  // V[i][j] = dof_i(shape_j).  Exact for moment DOFs, floating for nodal.
  RatMatrix vandermonde;
  RatMatrix vandermonde_inv;  // only when the dual basis was built
  Eigen::MatrixXd vandermonde_d;
  Eigen::MatrixXd vandermonde_inv_d;
  double condition = 0.0;  // nodal kind: 2-norm condition number
  bool has_dual = false;

  std::size_t dim() const { return shape.dim(); }
};

// Builds the element and certifies unisolvency (exact rank for moment DOFs,
// invertibility plus condition number for nodal DOFs).  A singular
// Vandermonde aborts with an exception.  With build_dual = false only the
// certification is done, which is much cheaper for large elements.
ElementDef build_element(int n, int k, int r, Family family, DofKind kind,
                         bool build_dual = true);

// Shared cache of fully built elements.
const ElementDef& get_element(int n, int k, int r, Family family, DofKind kind);

// Matrix of the reference interpolation onto the trimmed space, mapping
// Qtilde basis coordinates to Qminus basis coordinates.
RatMatrix hat_pi_matrix(int n, int k, int r);

// Interpolation of a single form; u must lie in the Qtilde space.
PolyForm hat_pi(const PolyForm& u, int r);

}  // namespace qtilde

#endif
