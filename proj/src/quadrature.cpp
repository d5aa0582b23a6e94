#include "qtilde/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qtilde {

namespace {

Poly1D poly1d_scale(const Poly1D& p, const Rational& c) {
  Poly1D q = p;
  for (auto& a : q) a *= c;
  return q;
}

Poly1D poly1d_sub(const Poly1D& p, const Poly1D& q) {
  Poly1D r = p;
  if (r.size() < q.size()) r.resize(q.size(), Rational(0));
  for (std::size_t i = 0; i < q.size(); ++i) r[i] -= q[i];
  return r;
}

Poly1D poly1d_shift_up(const Poly1D& p) {  // multiply by t
  Poly1D q(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) q[i + 1] = p[i];
  return q;
}

}  // namespace

Poly1D legendre_family(int s, LegendreKind kind) {
  if (s < 0) throw std::domain_error("legendre_family: negative degree");
  Poly1D prev = {Rational(1)};
  if (s == 0) return prev;
  Poly1D cur = {Rational(0), Rational(1)};
  for (int m = 1; m < s; ++m) {
    Poly1D next;
    if (kind == LegendreKind::Standard) {
      // (m+1) L_{m+1} = (2m+1) t L_m - m L_{m-1}
      next = poly1d_scale(
          poly1d_sub(poly1d_scale(poly1d_shift_up(cur), rat(2 * m + 1)),
                     poly1d_scale(prev, rat(m))),
          rat(1, m + 1));
    } else {
      // Monic three-term recurrence for the (1-t^2) weight on [-1,1].
      Rational b = rat(static_cast<long>(m) * (m + 2),
                       static_cast<long>(2 * m + 1) * (2 * m + 3));
      next = poly1d_sub(poly1d_shift_up(cur), poly1d_scale(prev, b));
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double poly1d_eval(const Poly1D& p, double t) {
  double v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * t + to_double(p[i]);
  return v;
}

Poly1D poly1d_derivative(const Poly1D& p) {
  if (p.size() <= 1) return {Rational(0)};
  Poly1D d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
  return d;
}

Rule1D gauss_lobatto(int r) {
  if (r < 1) throw std::domain_error("gauss_lobatto: r >= 1 required");
  const Poly1D lr = legendre_family(r, LegendreKind::Standard);
  const Poly1D dlr = poly1d_derivative(lr);
  const Poly1D ddlr = poly1d_derivative(dlr);

  Rule1D rule;
  rule.order = r;
  rule.nodes.push_back(-1.0);
  // Interior nodes are the roots of L_r'; Newton from Chebyshev extrema.
  for (int j = r - 1; j >= 1; --j) {
    double x = std::cos(M_PI * j / r);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double f = poly1d_eval(dlr, x);
      double fp = poly1d_eval(ddlr, x);
      double step = f / fp;
      x -= step;
      if (std::abs(step) < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_lobatto: Newton did not converge");
    rule.nodes.push_back(x);
  }
  rule.nodes.push_back(1.0);
  for (double x : rule.nodes) {
    double l = poly1d_eval(lr, x);
    rule.weights.push_back(2.0 / (r * (r + 1.0) * l * l));
  }
  // Validate against moment equations through degree 2r-1.
  for (int m = 0; m <= 2 * r - 1; ++m) {
    double quad = 0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      quad += rule.weights[j] * std::pow(rule.nodes[j], m);
    double exact = (m % 2 == 0) ? 2.0 / (m + 1) : 0.0;
    if (std::abs(quad - exact) > 1e-13)
      throw std::runtime_error("gauss_lobatto: moment validation failed");
  }
  return rule;
}

std::vector<int> TensorNodes::multi_index(std::size_t flat) const {
  std::vector<int> idx(dim);
  const int m = rule.order + 1;
  for (int i = 0; i < dim; ++i) {
    idx[i] = static_cast<int>(flat % m);
    flat /= m;
  }
  return idx;
}

TensorNodes tensor_nodes(int dim, int r) {
  TensorNodes tn;
  tn.dim = dim;
  tn.rule = gauss_lobatto(r);
  const int m = r + 1;
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= m;
  tn.points.reserve(total);
  tn.weights.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx = tn.multi_index(flat);
    std::vector<double> p(dim);
    double w = 1;
    for (int i = 0; i < dim; ++i) {
      p[i] = tn.rule.nodes[idx[i]];
      w *= tn.rule.weights[idx[i]];
    }
    tn.points.push_back(std::move(p));
    tn.weights.push_back(w);
  }
  return tn;
}

std::vector<double> nodal_values(const PolyForm& u, const TensorNodes& nodes) {
  const auto sigmas = enumerate_sigma(full_index_set(u.n), u.k);
  std::vector<double> out;
  out.reserve(sigmas.size() * nodes.count());
  for (const auto& sigma : sigmas)
    for (const auto& p : nodes.points) out.push_back(eval_component(u, sigma.sigma, p));
  return out;
}

double eval_full(const ScalarFn& v, const TensorNodes& nodes) {
  double total = 0;
  for (std::size_t i = 0; i < nodes.count(); ++i) total += nodes.weights[i] * v(nodes.points[i]);
  return total;
}

double eval_slice(const ScalarFn& v, const TensorNodes& nodes, const IndexMap& sigma,
                  const std::vector<int>& sigma_idx) {
  const IndexMap comp = sigma_complement(sigma);
  const int m = nodes.rule.order + 1;
  std::size_t slice = 1;
  for (std::size_t i = 0; i < comp.sigma.size(); ++i) slice *= m;
  double total = 0;
  std::vector<double> point(nodes.dim);
  for (std::size_t pos = 0; pos < sigma.sigma.size(); ++pos)
    point[sigma.sigma[pos] - 1] = nodes.rule.nodes[sigma_idx[pos]];
  for (std::size_t flat = 0; flat < slice; ++flat) {
    std::size_t rest = flat;
    double w = 1;
    for (int label : comp.sigma) {
      int j = static_cast<int>(rest % m);
      rest /= m;
      point[label - 1] = nodes.rule.nodes[j];
      w *= nodes.rule.weights[j];
    }
    total += w * v(point);
  }
  return total;
}

}  // namespace qtilde
