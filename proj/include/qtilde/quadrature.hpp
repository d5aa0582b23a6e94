// Legendre polynomials (standard and (1-t^2)-weighted monic), Gauss-Lobatto
// rules, tensor node sets on the reference box, and the evaluation
// functionals R_r / E_r used by the nodal degrees of freedom.

#ifndef QTILDE_QUADRATURE_HPP
#define QTILDE_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "qtilde/combinatorics.hpp"
#include "qtilde/polyform.hpp"
#include "qtilde/rational.hpp"

namespace qtilde {

// Polynomial in one variable, coefficient of t^i at index i, exact.
using Poly1D = std::vector<Rational>;

enum class LegendreKind { Standard, WeightedMonic };

// Standard L_s with L_s(1) = 1, or the monic degree-s polynomial orthogonal
// to all lower degrees under the weight (1 - t^2) on [-1, 1].
Poly1D legendre_family(int s, LegendreKind kind);

double poly1d_eval(const Poly1D& p, double t);
Poly1D poly1d_derivative(const Poly1D& p);

struct Rule1D {
  int order = 0;                // r; r+1 nodes
  std::vector<double> nodes;    // strictly increasing, includes -1 and 1
  std::vector<double> weights;  // positive, sum to 2
};

// Gauss-Lobatto rule with r+1 points, exact through degree 2r-1.
Rule1D gauss_lobatto(int r);

// Tensor product of one Gauss-Lobatto rule per axis on [-1,1]^dim.
// Point ordering is lexicographic by multi-index with axis 1 fastest; this
// ordering is part of the data contract.
struct TensorNodes {
  int dim = 0;
  Rule1D rule;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;

  std::size_t count() const { return points.size(); }
  std::vector<int> multi_index(std::size_t flat) const;
};

TensorNodes tensor_nodes(int dim, int r);

// R_r(u): component values at all nodes, ordered sigma lex-major then node
// index minor.
std::vector<double> nodal_values(const PolyForm& u, const TensorNodes& nodes);

using ScalarFn = std::function<double(const std::vector<double>&)>;

// E_r(v): full tensor quadrature sum.
double eval_full(const ScalarFn& v, const TensorNodes& nodes);

// E_{r, xi_sigma^i}(v): weighted sum over the sigma* axes with the sigma
// coordinates pinned to the node with per-axis indices sigma_idx.
double eval_slice(const ScalarFn& v, const TensorNodes& nodes, const IndexMap& sigma,
                  const std::vector<int>& sigma_idx);

}  // namespace qtilde

#endif
