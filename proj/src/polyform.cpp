#include "qtilde/polyform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtilde {

namespace {

bool term_less(const FormMonomial& a, const FormMonomial& b) {
  if (a.sigma != b.sigma) return a.sigma < b.sigma;
  return a.alpha < b.alpha;
}

// Sign of dx_sa ^ dx_sb as a reordering into increasing order, 0 if the
// label sets overlap.
int merge_sign(const IndexSet& sa, const IndexSet& sb, IndexSet& merged) {
  int inversions = 0;
  for (int i : sa)
    for (int j : sb) {
      if (i == j) return 0;
      if (i > j) ++inversions;
    }
  merged.clear();
  std::merge(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(merged));
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

PolyForm zero_form(int n, int k) { return zero_form_on(full_index_set(n), n, k); }

PolyForm zero_form_on(const IndexSet& free, int n, int k) {
  PolyForm u;
  u.n = n;
  u.k = k;
  u.free = free;
  return u;
}

PolyForm monomial_form(int n, const Rational& coeff, const MultiIndex& alpha,
                       const IndexSet& sigma) {
  return monomial_form_on(full_index_set(n), n, coeff, alpha, sigma);
}

PolyForm monomial_form_on(const IndexSet& free, int n, const Rational& coeff,
                          const MultiIndex& alpha, const IndexSet& sigma) {
  if (static_cast<int>(alpha.size()) != n)
    throw std::domain_error("monomial_form: alpha length != n");
  if (!is_subset(sigma, free)) throw std::domain_error("monomial_form: sigma not in free set");
  PolyForm u = zero_form_on(free, n, static_cast<int>(sigma.size()));
  if (coeff != 0) u.terms.push_back({coeff, alpha, sigma});
  return u;
}

void canonicalize(PolyForm& u) {
  std::sort(u.terms.begin(), u.terms.end(), term_less);
  std::vector<FormMonomial> out;
  for (auto& t : u.terms) {
    if (!out.empty() && out.back().sigma == t.sigma && out.back().alpha == t.alpha)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const FormMonomial& m) { return m.coeff == 0; }),
            out.end());
  u.terms = std::move(out);
}

PolyForm add(const PolyForm& u, const PolyForm& v) {
  // The zero form acts as a degree wildcard.
  if (u.is_zero() && u.free == v.free) return v;
  if (v.is_zero() && u.free == v.free) return u;
  if (u.k != v.k || u.free != v.free) throw std::domain_error("add: incompatible forms");
  PolyForm w = u;
  w.terms.insert(w.terms.end(), v.terms.begin(), v.terms.end());
  canonicalize(w);
  return w;
}

PolyForm sub(const PolyForm& u, const PolyForm& v) { return add(u, scale(v, Rational(-1))); }

PolyForm scale(const PolyForm& u, const Rational& c) {
  PolyForm w = u;
  if (c == 0) {
    w.terms.clear();
    return w;
  }
  for (auto& t : w.terms) t.coeff *= c;
  return w;
}

bool equal(const PolyForm& u, const PolyForm& v) { return sub(u, v).is_zero(); }

PolyForm wedge(const PolyForm& u, const PolyForm& v) {
  if (u.free != v.free) throw std::domain_error("wedge: ambient mismatch");
  PolyForm w = zero_form_on(u.free, u.n, u.k + v.k);
  if (u.k + v.k > static_cast<int>(u.free.size())) return w;  // zero by convention
  for (const auto& a : u.terms)
    for (const auto& b : v.terms) {
      IndexSet merged;
      int sign = merge_sign(a.sigma, b.sigma, merged);
      if (sign == 0) continue;
      MultiIndex alpha(u.n);
      for (int i = 0; i < u.n; ++i) alpha[i] = a.alpha[i] + b.alpha[i];
      w.terms.push_back({a.coeff * b.coeff * sign, std::move(alpha), std::move(merged)});
    }
  canonicalize(w);
  return w;
}

PolyForm exterior_derivative(const PolyForm& u) {
  PolyForm w = zero_form_on(u.free, u.n, u.k + 1);
  for (const auto& t : u.terms) {
    for (int i : u.free) {
      if (t.alpha[i - 1] == 0) continue;
      if (std::binary_search(t.sigma.begin(), t.sigma.end(), i)) continue;
      IndexMap sigma{t.sigma, u.free};
      MultiIndex alpha = t.alpha;
      Rational c = t.coeff * alpha[i - 1];
      alpha[i - 1] -= 1;
      c *= sign_eps(i, sigma);
      w.terms.push_back({c, std::move(alpha), sigma_plus(sigma, i).sigma});
    }
  }
  canonicalize(w);
  return w;
}

PolyForm koszul(const PolyForm& u, const std::vector<Rational>& center) {
  PolyForm w = zero_form_on(u.free, u.n, std::max(u.k - 1, 0));
  if (u.k == 0) return w;  // zero by convention
  for (const auto& t : u.terms) {
    for (std::size_t pos = 0; pos < t.sigma.size(); ++pos) {
      const int i = t.sigma[pos];
      const int sign = (pos % 2 == 0) ? 1 : -1;
      IndexSet reduced;
      for (int l : t.sigma)
        if (l != i) reduced.push_back(l);
      // (x_i - c_i) contribution splits into two monomials.
      MultiIndex with_x = t.alpha;
      with_x[i - 1] += 1;
      w.terms.push_back({t.coeff * sign, std::move(with_x), reduced});
      if (center[i - 1] != 0)
        w.terms.push_back({-t.coeff * sign * center[i - 1], t.alpha, reduced});
    }
  }
  canonicalize(w);
  return w;
}

PolyForm koszul(const PolyForm& u) {
  return koszul(u, std::vector<Rational>(u.n, Rational(0)));
}

PolyForm contract_constant(const PolyForm& u, const std::vector<Rational>& b) {
  PolyForm w = zero_form_on(u.free, u.n, std::max(u.k - 1, 0));
  if (u.k == 0) return w;
  for (const auto& t : u.terms)
    for (std::size_t pos = 0; pos < t.sigma.size(); ++pos) {
      const int i = t.sigma[pos];
      if (b[i - 1] == 0) continue;
      const int sign = (pos % 2 == 0) ? 1 : -1;
      IndexSet reduced;
      for (int l : t.sigma)
        if (l != i) reduced.push_back(l);
      w.terms.push_back({t.coeff * sign * b[i - 1], t.alpha, std::move(reduced)});
    }
  canonicalize(w);
  return w;
}

PolyForm trace(const PolyForm& u, const Face& f) {
  PolyForm w = zero_form_on(f.free, u.n, u.k);
  for (const auto& t : u.terms) {
    bool drop = false;
    for (int l : t.sigma)
      if (f.fixed.count(l)) {
        drop = true;
        break;
      }
    if (drop) continue;
    Rational c = t.coeff;
    MultiIndex alpha = t.alpha;
    for (const auto& [label, value] : f.fixed) {
      c *= rat_pow(value, alpha[label - 1]);
      alpha[label - 1] = 0;
      if (c == 0) break;
    }
    if (c != 0) w.terms.push_back({c, std::move(alpha), t.sigma});
  }
  canonicalize(w);
  return w;
}

std::pair<int, int> degrees(const FormMonomial& m, const IndexSet& free, int s) {
  int cdeg = 0, ncdeg = 0;
  for (int i : free) {
    if (m.alpha[i - 1] != s) continue;
    if (std::binary_search(m.sigma.begin(), m.sigma.end(), i))
      ++cdeg;
    else
      ++ncdeg;
  }
  return {cdeg, ncdeg};
}

PolyForm pullback_affine(const AffineDiagonalMap& phi, const PolyForm& u) {
  for (const Rational& a : phi.scale)
    if (a == 0) throw std::domain_error("pullback_affine: zero scale");
  PolyForm w = zero_form_on(u.free, u.n, u.k);
  for (const auto& t : u.terms) {
    Rational base = t.coeff;
    for (int i : t.sigma) base *= phi.scale[i - 1];
    // Expand prod_i (a_i x_i + b_i)^{alpha_i} by binomial per axis.
    std::vector<std::pair<MultiIndex, Rational>> expanded = {{MultiIndex(u.n, 0), base}};
    for (int i = 0; i < u.n; ++i) {
      const int e = t.alpha[i];
      if (e == 0) continue;
      std::vector<std::pair<MultiIndex, Rational>> next;
      for (const auto& [alpha, c] : expanded)
        for (int j = 0; j <= e; ++j) {
          Rational cc = c * binomial(e, j) * rat_pow(phi.scale[i], j) *
                        rat_pow(phi.shift[i], e - j);
          if (cc == 0) continue;
          MultiIndex a2 = alpha;
          a2[i] += j;
          next.push_back({std::move(a2), std::move(cc)});
        }
      expanded = std::move(next);
    }
    for (auto& [alpha, c] : expanded) w.terms.push_back({c, std::move(alpha), t.sigma});
  }
  canonicalize(w);
  return w;
}

Rational integrate_box(const PolyForm& u, const Box& box) {
  if (u.k != static_cast<int>(u.free.size()) || box.size() != u.free.size())
    throw std::domain_error("integrate_box: degree/box mismatch");
  Rational total = 0;
  for (const auto& t : u.terms) {
    if (t.sigma != u.free) throw std::domain_error("integrate_box: not top degree");
    Rational v = t.coeff;
    for (std::size_t pos = 0; pos < u.free.size(); ++pos) {
      const int e = t.alpha[u.free[pos] - 1];
      const auto& [a, b] = box[pos];
      v *= (rat_pow(b, e + 1) - rat_pow(a, e + 1)) / (e + 1);
    }
    total += v;
  }
  return total;
}

Rational inner_product_box(const PolyForm& u, const PolyForm& v, const Box& box) {
  if (u.free != v.free || u.k != v.k)
    throw std::domain_error("inner_product_box: incompatible forms");
  Rational total = 0;
  for (const auto& a : u.terms)
    for (const auto& b : v.terms) {
      if (a.sigma != b.sigma) continue;
      Rational val = a.coeff * b.coeff;
      for (std::size_t pos = 0; pos < u.free.size(); ++pos) {
        const int e = a.alpha[u.free[pos] - 1] + b.alpha[u.free[pos] - 1];
        const auto& [lo, hi] = box[pos];
        val *= (rat_pow(hi, e + 1) - rat_pow(lo, e + 1)) / (e + 1);
      }
      total += val;
    }
  return total;
}

Box symmetric_box(int dim) {
  return Box(dim, {Rational(-1), Rational(1)});
}

std::vector<std::pair<MultiIndex, Rational>> component(const PolyForm& u,
                                                       const IndexSet& sigma) {
  std::vector<std::pair<MultiIndex, Rational>> out;
  for (const auto& t : u.terms)
    if (t.sigma == sigma) out.push_back({t.alpha, t.coeff});
  return out;
}

double eval_component(const PolyForm& u, const IndexSet& sigma,
                      const std::vector<double>& point) {
  double total = 0;
  for (const auto& t : u.terms) {
    if (t.sigma != sigma) continue;
    double v = to_double(t.coeff);
    for (int i = 0; i < u.n; ++i)
      for (int e = 0; e < t.alpha[i]; ++e) v *= point[i];
    total += v;
  }
  return total;
}

PolyForm homogeneous_part(const PolyForm& u, int d) {
  PolyForm w = zero_form_on(u.free, u.n, u.k);
  for (const auto& t : u.terms) {
    int deg = 0;
    for (int e : t.alpha) deg += e;
    if (deg == d) w.terms.push_back(t);
  }
  return w;
}

std::string to_string(const PolyForm& u) {
  if (u.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : u.terms) {
    Rational c = t.coeff;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    } else if (c < 0) {
      os << "-";
      c = -c;
    }
    first = false;
    bool printed = false;
    if (c != 1) {
      os << c.get_str();
      printed = true;
    }
    for (int i = 0; i < u.n; ++i) {
      if (t.alpha[i] == 0) continue;
      if (printed) os << " ";
      os << "x" << (i + 1);
      if (t.alpha[i] > 1) os << "^" << t.alpha[i];
      printed = true;
    }
    if (!t.sigma.empty()) {
      if (printed) os << " ";
      for (std::size_t j = 0; j < t.sigma.size(); ++j) {
        if (j) os << "^";
        os << "dx" << t.sigma[j];
      }
      printed = true;
    }
    if (!printed) os << "1";
  }
  return os.str();
}

}  // namespace qtilde
