// Shape-function spaces on the reference box: full tensor Q_r, the trimmed
// family Q_r^-, its complement B_r, and the enriched family
// Qtilde_r = Q_r^- + d kappa B_r.  All membership tests are exact.

#ifndef QTILDE_SPACES_HPP
#define QTILDE_SPACES_HPP

#include <map>
#include <optional>
#include <vector>

#include "qtilde/polyform.hpp"
#include "qtilde/ratlinalg.hpp"

namespace qtilde {

enum class Family { Q, Qminus, B, Qtilde };

struct SpaceBasis {
  Family family;
  int n = 0, k = 0, r = 0;
  IndexSet free;  // ambient labels; defaults to {1..n}
  std::vector<PolyForm> basis;

  std::size_t dim() const { return basis.size(); }
};

long space_dimension(Family family, int n, int k, int r);

// Monomial-derived basis in deterministic lexicographic order
// (sigma-major, exponent-minor).  For Qtilde the basis is the Q_r^- monomials
// followed by d kappa applied to the B_r monomials.
SpaceBasis basis(Family family, int n, int k, int r);

// Same families but over the free labels of a face.
SpaceBasis basis_on(Family family, const IndexSet& free, int n, int k, int r);

// Coordinates of a set of forms over their joint monomial support.
// Rows are (sigma, alpha) keys, columns the forms.
RatMatrix coordinate_matrix(const std::vector<PolyForm>& forms);

// Exact membership: coordinates of u in span(S.basis), or nullopt.
std::optional<RatVector> membership(const PolyForm& u, const SpaceBasis& S);

}  // namespace qtilde

#endif
