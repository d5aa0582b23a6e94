#include "qtilde/refelem.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace qtilde {

namespace {

// Exponent vectors over the given labels with per-label caps, sorted
// lexicographically as full length-n vectors.
std::vector<MultiIndex> capped_exponents(const IndexSet& labels, int n,
                                         const std::map<int, int>& cap) {
  std::vector<MultiIndex> out;
  MultiIndex alpha(n, 0);
  while (true) {
    out.push_back(alpha);
    int pos = static_cast<int>(labels.size()) - 1;
    while (pos >= 0 && alpha[labels[pos] - 1] == cap.at(labels[pos])) {
      alpha[labels[pos] - 1] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++alpha[labels[pos] - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Face> box_faces(int n, int l) {
  if (l < 0 || l > n) throw std::domain_error("box_faces: invalid dimension");
  std::vector<Face> faces;
  for (const auto& free_map : enumerate_sigma(full_index_set(n), l)) {
    IndexSet fixed = sigma_complement(free_map).sigma;
    const int nf = static_cast<int>(fixed.size());
    for (int mask = 0; mask < (1 << nf); ++mask) {
      Face f;
      f.n = n;
      f.free = free_map.sigma;
      for (int b = 0; b < nf; ++b)
        f.fixed[fixed[b]] = (mask >> b & 1) ? Rational(1) : Rational(-1);
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

std::vector<MomentDof> moment_dofs(int n, int k, int r, Family family) {
  if (family != Family::Qtilde && family != Family::Qminus)
    throw std::domain_error("moment_dofs: family must be Qtilde or Qminus");
  if (r < 1 || k < 0 || k > n) throw std::domain_error("moment_dofs: invalid (n, k, r)");
  std::vector<MomentDof> dofs;
  for (int l = k; l <= n; ++l) {
    for (const Face& f : box_faces(n, l)) {
      if (family == Family::Qminus) {
        // weights from the trimmed space of complementary degree, one order
        // down; empty when that space is trivial.
        SpaceBasis wsp = basis_on(Family::Qminus, f.free, n, l - k, r - 1);
        for (const PolyForm& v : wsp.basis) dofs.push_back({f, v});
        continue;
      }
      for (const auto& tau : enumerate_sigma(f.free, l - k)) {
        if (r - 2 < 0 && !tau.sigma.empty()) continue;  // Q_{-1} is empty
        std::map<int, int> cap;
        for (int i : tau.sigma) cap[i] = r - 2;
        for (int i : sigma_complement(tau).sigma) cap[i] = r;
        for (const MultiIndex& beta : capped_exponents(f.free, n, cap))
          dofs.push_back({f, monomial_form_on(f.free, n, Rational(1), beta, tau.sigma)});
      }
    }
  }
  return dofs;
}

Rational apply_moment_dof(const MomentDof& dof, const PolyForm& u) {
  PolyForm tr = trace(u, dof.face);
  PolyForm w = wedge(tr, dof.weight);
  if (w.is_zero()) return 0;
  return integrate_box(w, symmetric_box(static_cast<int>(dof.face.free.size())));
}

namespace {

RatMatrix moment_vandermonde(const std::vector<MomentDof>& dofs,
                             const std::vector<PolyForm>& shape) {
  RatMatrix v = rat_zeros(dofs.size(), shape.size());
  // Group by face so each shape function is traced once per face.
  std::size_t i = 0;
  while (i < dofs.size()) {
    std::size_t j = i;
    while (j < dofs.size() && dofs[j].face.fixed == dofs[i].face.fixed &&
           dofs[j].face.free == dofs[i].face.free)
      ++j;
    const Face& f = dofs[i].face;
    Box box = symmetric_box(static_cast<int>(f.free.size()));
    for (std::size_t c = 0; c < shape.size(); ++c) {
      PolyForm tr = trace(shape[c], f);
      if (tr.is_zero()) continue;
      for (std::size_t d = i; d < j; ++d) {
        PolyForm w = wedge(tr, dofs[d].weight);
        if (!w.is_zero()) v[d][c] = integrate_box(w, box);
      }
    }
    i = j;
  }
  return v;
}

}  // namespace

ElementDef build_element(int n, int k, int r, Family family, DofKind kind,
                         bool build_dual) {
  ElementDef e;
  e.n = n;
  e.k = k;
  e.r = r;
  e.family = family;
  e.kind = kind;

  if (kind == DofKind::Moment) {
    if (family != Family::Qtilde && family != Family::Qminus)
      throw std::domain_error("build_element: moment DOFs need Qtilde or Qminus");
    e.shape = basis(family, n, k, r);
    e.dofs = moment_dofs(n, k, r, family);
    if (e.dofs.size() != e.shape.dim())
      throw std::runtime_error("build_element: DOF count != space dimension");
    e.vandermonde = moment_vandermonde(e.dofs, e.shape.basis);
    if (build_dual) {
      auto inv = rat_inverse(e.vandermonde);
      if (!inv) throw std::runtime_error("build_element: singular moment Vandermonde");
      e.vandermonde_inv = std::move(*inv);
      e.has_dual = true;
    } else if (!rat_full_rank(e.vandermonde)) {
      throw std::runtime_error("build_element: singular moment Vandermonde");
    }
    return e;
  }

  // Nodal DOFs are unisolvent for Qtilde (and Q coincides with it at the
  // endpoints of the degree range).
  if (!(family == Family::Qtilde || (family == Family::Q && (k == 0 || k == n))))
    throw std::domain_error("build_element: nodal DOFs need Qtilde (or Q at k=0,n)");
  e.shape = basis(family, n, k, r);
  e.nodes = tensor_nodes(n, r);
  const std::size_t m = e.shape.dim();
  e.vandermonde_d.resize(m, m);
  for (std::size_t c = 0; c < m; ++c) {
    auto vals = nodal_values(e.shape.basis[c], e.nodes);
    if (vals.size() != m)
      throw std::runtime_error("build_element: nodal value count mismatch");
    for (std::size_t i = 0; i < m; ++i) e.vandermonde_d(i, c) = vals[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e.vandermonde_d);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  double smax = svd.singularValues()(0);
  if (smin <= 0)
    throw std::runtime_error("build_element: singular nodal Vandermonde");
  e.condition = smax / smin;
  if (build_dual) {
    e.vandermonde_inv_d = e.vandermonde_d.fullPivLu().inverse();
    e.has_dual = true;
  }
  return e;
}

const ElementDef& get_element(int n, int k, int r, Family family, DofKind kind) {
  using Key = std::tuple<int, int, int, Family, DofKind>;
  static std::map<Key, std::unique_ptr<ElementDef>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k, r, family, kind}];
  if (!slot) slot = std::make_unique<ElementDef>(build_element(n, k, r, family, kind));
  return *slot;
}

RatMatrix hat_pi_matrix(int n, int k, int r) {
  const ElementDef& minus = get_element(n, k, r, Family::Qminus, DofKind::Moment);
  SpaceBasis qt = basis(Family::Qtilde, n, k, r);
  RatMatrix d = moment_vandermonde(minus.dofs, qt.basis);
  const std::size_t m = minus.dim();
  RatMatrix p = rat_zeros(m, qt.dim());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < qt.dim(); ++j)
      for (std::size_t t = 0; t < m; ++t)
        p[i][j] += minus.vandermonde_inv[i][t] * d[t][j];
  return p;
}

PolyForm hat_pi(const PolyForm& u, int r) {
  const int n = u.n, k = u.k;
  SpaceBasis qt = basis(Family::Qtilde, n, k, r);
  if (!membership(u, qt)) throw std::domain_error("hat_pi: form outside the Qtilde space");
  const ElementDef& minus = get_element(n, k, r, Family::Qminus, DofKind::Moment);
  const std::size_t m = minus.dim();
  RatVector d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = apply_moment_dof(minus.dofs[i], u);
  PolyForm out = zero_form(n, k);
  for (std::size_t j = 0; j < m; ++j) {
    Rational c = 0;
    for (std::size_t t = 0; t < m; ++t) c += minus.vandermonde_inv[j][t] * d[t];
    if (c != 0) out = add(out, scale(minus.shape.basis[j], c));
  }
  return out;
}

}  // namespace qtilde
