// Polynomial differential forms with exact rational coefficients.
//
// A PolyForm lives over global coordinates x1..xn but carries an explicit
// ambient set of free labels, so forms on faces of the reference box keep
// their Sigma_k(f) structure after taking traces.

#ifndef QTILDE_POLYFORM_HPP
#define QTILDE_POLYFORM_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtilde/combinatorics.hpp"
#include "qtilde/rational.hpp"

namespace qtilde {

// Exponent vector of length n; entries for non-free labels are zero.
using MultiIndex = std::vector<int>;

struct FormMonomial {
  Rational coeff;
  MultiIndex alpha;
  IndexSet sigma;  // increasing labels, subset of the owning form's free set
};

// c x^alpha dx_sigma terms in canonical order: sorted by (sigma, alpha),
// merged, zero-free.
struct PolyForm {
  int n = 0;
  int k = 0;
  IndexSet free;  // ambient free labels; sigma of every term is a subset
  std::vector<FormMonomial> terms;

  bool is_zero() const { return terms.empty(); }
};

// A face of R^n: fixed labels pinned to rational values, the rest free.
struct Face {
  int n = 0;
  std::map<int, Rational> fixed;
  IndexSet free;
};

// x -> scale .* x + shift, per axis, all scales nonzero.
struct AffineDiagonalMap {
  std::vector<Rational> scale;
  std::vector<Rational> shift;
};

PolyForm zero_form(int n, int k);
PolyForm zero_form_on(const IndexSet& free, int n, int k);
PolyForm monomial_form(int n, const Rational& coeff, const MultiIndex& alpha,
                       const IndexSet& sigma);
PolyForm monomial_form_on(const IndexSet& free, int n, const Rational& coeff,
                          const MultiIndex& alpha, const IndexSet& sigma);

void canonicalize(PolyForm& u);

PolyForm add(const PolyForm& u, const PolyForm& v);
PolyForm sub(const PolyForm& u, const PolyForm& v);
PolyForm scale(const PolyForm& u, const Rational& c);
bool equal(const PolyForm& u, const PolyForm& v);

// Graded-anticommutative wedge.  Overflowing degree gives the zero form.
PolyForm wedge(const PolyForm& u, const PolyForm& v);

PolyForm exterior_derivative(const PolyForm& u);

// Contraction with (x - center); center of size n (entries outside the free
// set are ignored).  The origin-centered case is the Koszul operator.
PolyForm koszul(const PolyForm& u, const std::vector<Rational>& center);
PolyForm koszul(const PolyForm& u);

// Contraction with a constant vector b.
PolyForm contract_constant(const PolyForm& u, const std::vector<Rational>& b);

PolyForm trace(const PolyForm& u, const Face& f);

// (cdeg_s, ncdeg_s) of a form monomial relative to a free set.
std::pair<int, int> degrees(const FormMonomial& m, const IndexSet& free, int s);

PolyForm pullback_affine(const AffineDiagonalMap& phi, const PolyForm& u);

// Exact integral of a top-degree form over a product of rational intervals,
// one interval per free label in increasing label order.
using Box = std::vector<std::pair<Rational, Rational>>;
Rational integrate_box(const PolyForm& u, const Box& box);

// Componentwise L2 pairing sum_sigma int u_sigma v_sigma over the box.
Rational inner_product_box(const PolyForm& u, const PolyForm& v, const Box& box);

Box symmetric_box(int dim);  // [-1,1]^dim

// Component polynomial of dx_sigma as (alpha, coeff) pairs.
std::vector<std::pair<MultiIndex, Rational>> component(const PolyForm& u,
                                                       const IndexSet& sigma);

double eval_component(const PolyForm& u, const IndexSet& sigma,
                      const std::vector<double>& point);

// Keep only terms of total polynomial degree d (homogeneous part).
PolyForm homogeneous_part(const PolyForm& u, int d);

std::string to_string(const PolyForm& u);

}  // namespace qtilde

#endif
