#include "qtilde/spaces.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtilde {

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// All exponent vectors with alpha_i in [0, r] on the free labels, counting
// lexicographically in label order.
std::vector<MultiIndex> exponents(const IndexSet& free, int n, int r) {
  std::vector<MultiIndex> out;
  MultiIndex alpha(n, 0);
  while (true) {
    out.push_back(alpha);
    int pos = static_cast<int>(free.size()) - 1;
    while (pos >= 0 && alpha[free[pos] - 1] == r) {
      alpha[free[pos] - 1] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++alpha[free[pos] - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

long space_dimension(Family family, int n, int k, int r) {
  switch (family) {
    case Family::Q:
    case Family::Qtilde:
      return binomial(n, k) * ipow(r + 1, n);
    case Family::Qminus:
      return binomial(n, k) * ipow(r, k) * ipow(r + 1, n - k);
    case Family::B:
      return binomial(n, k) * (ipow(r + 1, n) - ipow(r, k) * ipow(r + 1, n - k));
  }
  return 0;
}

SpaceBasis basis_on(Family family, const IndexSet& free, int n, int k, int r) {
  const int m = static_cast<int>(free.size());
  // r = 0 is allowed for the plain families (needed for Q_{r-1}^- weight
  // spaces at r = 1); Qtilde itself needs r >= 1.
  const int rmin = (family == Family::Qtilde) ? 1 : 0;
  if (k < 0 || k > m || r < rmin) throw std::domain_error("basis: invalid (n, k, r)");
  SpaceBasis S{family, n, k, r, free, {}};

  if (family == Family::Qtilde) {
    SpaceBasis qm = basis_on(Family::Qminus, free, n, k, r);
    SpaceBasis bb = basis_on(Family::B, free, n, k, r);
    S.basis = qm.basis;
    for (const PolyForm& u : bb.basis)
      S.basis.push_back(exterior_derivative(koszul(u)));
    if (S.basis.size() != static_cast<std::size_t>(binomial(m, k) * ipow(r + 1, m)) ||
        !rat_full_rank(coordinate_matrix(S.basis)))
      throw std::runtime_error("basis: rank deficiency in Qtilde construction");
    return S;
  }

  const auto sigmas = enumerate_sigma(free, k);
  const auto alphas = exponents(free, n, r);
  for (const auto& sigma : sigmas)
    for (const auto& alpha : alphas) {
      int cdeg_r = 0;
      for (int i : sigma.sigma)
        if (alpha[i - 1] == r) ++cdeg_r;
      if (family == Family::Qminus && cdeg_r != 0) continue;
      if (family == Family::B && cdeg_r == 0) continue;
      S.basis.push_back(monomial_form_on(free, n, Rational(1), alpha, sigma.sigma));
    }
  return S;
}

SpaceBasis basis(Family family, int n, int k, int r) {
  return basis_on(family, full_index_set(n), n, k, r);
}

RatMatrix coordinate_matrix(const std::vector<PolyForm>& forms) {
  std::map<std::pair<IndexSet, MultiIndex>, std::size_t> keys;
  for (const auto& u : forms)
    for (const auto& t : u.terms)
      keys.emplace(std::make_pair(t.sigma, t.alpha), keys.size());
  RatMatrix a = rat_zeros(keys.size(), forms.size());
  for (std::size_t j = 0; j < forms.size(); ++j)
    for (const auto& t : forms[j].terms)
      a[keys.at({t.sigma, t.alpha})][j] = t.coeff;
  return a;
}

std::optional<RatVector> membership(const PolyForm& u, const SpaceBasis& S) {
  if (u.k != S.k || u.free != S.free)
    throw std::domain_error("membership: form and space disagree on (free, k)");
  std::map<std::pair<IndexSet, MultiIndex>, std::size_t> keys;
  auto collect = [&](const PolyForm& f) {
    for (const auto& t : f.terms) keys.emplace(std::make_pair(t.sigma, t.alpha), keys.size());
  };
  for (const auto& f : S.basis) collect(f);
  collect(u);
  RatMatrix a = rat_zeros(keys.size(), S.basis.size());
  RatVector b(keys.size(), Rational(0));
  for (std::size_t j = 0; j < S.basis.size(); ++j)
    for (const auto& t : S.basis[j].terms) a[keys.at({t.sigma, t.alpha})][j] = t.coeff;
  for (const auto& t : u.terms) b[keys.at({t.sigma, t.alpha})] = t.coeff;
  return rat_solve(std::move(a), std::move(b));
}

}  // namespace qtilde
