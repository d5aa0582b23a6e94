#include "qtilde/assembly.hpp"

#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>

namespace qtilde {

namespace {

// exact integral over [-1,1]^n of the product of two monomial tables
Rational monomial_pair_integral(const std::vector<std::pair<MultiIndex, Rational>>& a,
                                const std::vector<std::pair<MultiIndex, Rational>>& b,
                                int n) {
  Rational total = 0;
  for (const auto& [alpha, ca] : a)
    for (const auto& [beta, cb] : b) {
      Rational v = ca * cb;
      for (int i = 0; i < n && v != 0; ++i) {
        int e = alpha[i] + beta[i];
        if (e % 2) {
          v = 0;
        } else {
          v *= rat(2, e + 1);
        }
      }
      total += v;
    }
  return total;
}

// component tables of a list of forms for one sigma
std::vector<std::vector<std::pair<MultiIndex, Rational>>> component_tables(
    const std::vector<PolyForm>& forms, const IndexSet& sigma) {
  std::vector<std::vector<std::pair<MultiIndex, Rational>>> out;
  out.reserve(forms.size());
  for (const auto& u : forms) out.push_back(component(u, sigma));
  return out;
}

Eigen::MatrixXd to_dense(const RatMatrix& a) {
  Eigen::MatrixXd d(a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) d(i, j) = to_double(a[i][j]);
  return d;
}

// exact monomial Gram int phi_a,sigma phi_b,sigma' between two shape bases
Eigen::MatrixXd monomial_gram(const std::vector<PolyForm>& left, const IndexSet& ls,
                              const std::vector<PolyForm>& right, const IndexSet& rs,
                              int n) {
  auto ta = component_tables(left, ls);
  auto tb = component_tables(right, rs);
  Eigen::MatrixXd g(left.size(), right.size());
  for (std::size_t a = 0; a < left.size(); ++a)
    for (std::size_t b = 0; b < right.size(); ++b)
      g(a, b) = to_double(monomial_pair_integral(ta[a], tb[b], n));
  return g;
}

std::vector<IndexSet> sigma_list(int n, int k) {
  std::vector<IndexSet> out;
  for (const auto& s : enumerate_sigma(full_index_set(n), k)) out.push_back(s.sigma);
  return out;
}

// component scaling factor prod_{l in sigma} 2/h_l
double comp_scale(const IndexSet& sigma, const std::vector<Rational>& h) {
  double t = 1;
  for (int l : sigma) t *= 2.0 / to_double(h[l - 1]);
  return t;
}

double half_volume(const std::vector<Rational>& h) {
  double v = 1;
  for (const auto& s : h) v *= to_double(s) / 2.0;
  return v;
}

std::size_t dof_count(const StructuredCubicalMesh& mesh, int k, int r) {
  return global_dofs(mesh, k, r).count;
}

// d of the nodal dual basis functions, exact (the floating dual
// coefficients are rationalized exactly)
std::vector<PolyForm> dual_derivatives(const ElementDef& e) {
  std::vector<PolyForm> out;
  const auto m = static_cast<Eigen::Index>(e.dim());
  for (Eigen::Index i = 0; i < m; ++i) {
    PolyForm psi = zero_form(e.n, e.k);
    for (Eigen::Index a = 0; a < m; ++a) {
      Rational c(e.vandermonde_inv_d(a, i));
      if (c != 0) psi = add(psi, scale(e.shape.basis[a], c));
    }
    out.push_back(exterior_derivative(psi));
  }
  return out;
}

}  // namespace

CoefficientField constant_coefficient(const StructuredCubicalMesh& mesh,
                                      const Eigen::MatrixXd& K) {
  CoefficientField field;
  field.per_cell.assign(mesh.active_cells().size(), K);
  return field;
}

CoefficientField random_spd_coefficient(const StructuredCubicalMesh& mesh, int k,
                                        unsigned seed, double spread) {
  const int comps = static_cast<int>(binomial(mesh.n, k));
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> ev(1.0, 1.0 + spread);
  CoefficientField field;
  for (std::size_t c = 0; c < mesh.active_cells().size(); ++c) {
    Eigen::MatrixXd a(comps, comps);
    for (int i = 0; i < comps; ++i)
      for (int j = 0; j < comps; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd d(comps);
    for (int i = 0; i < comps; ++i) d(i) = ev(rng);
    field.per_cell.push_back(q * d.asDiagonal() * q.transpose());
  }
  return field;
}

void validate_spd(const CoefficientField& K, int comps) {
  for (const auto& m : K.per_cell) {
    if (m.rows() != comps || m.cols() != comps)
      throw std::domain_error("coefficient: wrong component dimension");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + m.cwiseAbs().maxCoeff()))
      throw std::domain_error("coefficient: not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.eigenvalues()(0) <= 0) throw std::domain_error("coefficient: not positive definite");
  }
}

const std::vector<std::vector<Eigen::MatrixXd>>& reference_dual_gram(int n, int k, int r) {
  using Key = std::tuple<int, int, int>;
  static std::map<Key, std::vector<std::vector<Eigen::MatrixXd>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k, r});
  if (it != cache.end()) return it->second;

  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto sigmas = sigma_list(n, k);
  const auto& vinv = e.vandermonde_inv_d;
  std::vector<std::vector<Eigen::MatrixXd>> grams(sigmas.size());
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    grams[s].resize(sigmas.size());
    for (std::size_t t = 0; t < sigmas.size(); ++t) {
      if (t < s) {
        grams[s][t] = grams[t][s].transpose();
        continue;
      }
      Eigen::MatrixXd g =
          monomial_gram(e.shape.basis, sigmas[s], e.shape.basis, sigmas[t], n);
      grams[s][t] = vinv.transpose() * g * vinv;
    }
  }
  return cache.emplace(Key{n, k, r}, std::move(grams)).first->second;
}

SpMat assemble_mass(const StructuredCubicalMesh& mesh, int k, int r, MassMode mode,
                    const CoefficientField& K) {
  const int n = mesh.n;
  auto sigmas = sigma_list(n, k);
  const int comps = static_cast<int>(sigmas.size());
  if (!K.is_identity()) validate_spd(K, comps);
  auto map = global_dofs(mesh, k, r);
  auto cells = mesh.active_cells();
  if (!K.is_identity() && K.per_cell.size() != cells.size())
    throw std::domain_error("coefficient: one matrix per active cell expected");

  const double vol2 = half_volume(mesh.spacing);
  std::vector<double> tscale(comps);
  for (int s = 0; s < comps; ++s) tscale[s] = comp_scale(sigmas[s], mesh.spacing);

  std::vector<Eigen::Triplet<double>> trips;
  if (mode == MassMode::Lumped) {
    const auto nodes = tensor_nodes(n, r);
    const std::size_t pts = nodes.count();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& l2g = map.local_to_global[c];
      for (std::size_t m = 0; m < pts; ++m) {
        const double wm = vol2 * nodes.weights[m];
        for (int s = 0; s < comps; ++s)
          for (int t = 0; t < comps; ++t) {
            double kst = K.is_identity() ? (s == t ? 1.0 : 0.0) : K.per_cell[c](s, t);
            if (kst == 0.0) continue;
            trips.emplace_back(static_cast<int>(l2g[s * pts + m]),
                               static_cast<int>(l2g[t * pts + m]),
                               wm * kst * tscale[s] * tscale[t]);
          }
      }
    }
  } else {
    const auto& grams = reference_dual_gram(n, k, r);
    const std::size_t dim = grams[0][0].rows();
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(dim, dim);
    bool local_valid = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!local_valid || !K.is_identity()) {
        local.setZero();
        for (int s = 0; s < comps; ++s)
          for (int t = 0; t < comps; ++t) {
            double kst = K.is_identity() ? (s == t ? 1.0 : 0.0) : K.per_cell[c](s, t);
            if (kst != 0.0) local += (vol2 * kst * tscale[s] * tscale[t]) * grams[s][t];
          }
        local_valid = true;
      }
      const auto& l2g = map.local_to_global[c];
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          if (local(i, j) != 0.0)
            trips.emplace_back(static_cast<int>(l2g[i]), static_cast<int>(l2g[j]),
                               local(i, j));
    }
  }
  SpMat out(static_cast<int>(map.count), static_cast<int>(map.count));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat assemble_mixed(const StructuredCubicalMesh& mesh, int k, int r) {
  const int n = mesh.n;
  if (k < 1) throw std::domain_error("assemble_mixed: needs k >= 1");
  const ElementDef& elo = get_element(n, k - 1, r, Family::Qtilde, DofKind::Nodal);
  const ElementDef& ehi = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto sigmas = sigma_list(n, k);

  // reference <d psi_i^{k-1}, psi_j^k> accumulated over components with the
  // appropriate physical scalings
  auto dlo = dual_derivatives(elo);
  const double vol2 = half_volume(mesh.spacing);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(elo.dim(), ehi.dim());
  for (const auto& sig : sigmas) {
    Eigen::MatrixXd g = monomial_gram(dlo, sig, ehi.shape.basis, sig, n);
    double t = comp_scale(sig, mesh.spacing);
    local += (vol2 * t * t) * (g * ehi.vandermonde_inv_d);
  }

  auto map_lo = global_dofs(mesh, k - 1, r);
  auto map_hi = global_dofs(mesh, k, r);
  std::vector<Eigen::Triplet<double>> trips;
  auto cells = mesh.active_cells();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t i = 0; i < elo.dim(); ++i)
      for (std::size_t j = 0; j < ehi.dim(); ++j)
        if (local(i, j) != 0.0)
          trips.emplace_back(static_cast<int>(map_lo.local_to_global[c][i]),
                             static_cast<int>(map_hi.local_to_global[c][j]),
                             local(i, j));
  SpMat out(static_cast<int>(map_lo.count), static_cast<int>(map_hi.count));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat assemble_stiffness(const StructuredCubicalMesh& mesh, int k, int r) {
  const int n = mesh.n;
  auto map = global_dofs(mesh, k, r);
  SpMat out(static_cast<int>(map.count), static_cast<int>(map.count));
  if (k >= n) return out;  // d vanishes on top-degree forms
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto d = dual_derivatives(e);
  const double vol2 = half_volume(mesh.spacing);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(e.dim(), e.dim());
  for (const auto& sig : sigma_list(n, k + 1)) {
    Eigen::MatrixXd g = monomial_gram(d, sig, d, sig, n);
    double t = comp_scale(sig, mesh.spacing);
    local += (vol2 * t * t) * g;
  }
  std::vector<Eigen::Triplet<double>> trips;
  auto cells = mesh.active_cells();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t i = 0; i < e.dim(); ++i)
      for (std::size_t j = 0; j < e.dim(); ++j)
        if (local(i, j) != 0.0)
          trips.emplace_back(static_cast<int>(map.local_to_global[c][i]),
                             static_cast<int>(map.local_to_global[c][j]), local(i, j));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat derivative_matrix(const StructuredCubicalMesh& mesh, int k, int r) {
  const int n = mesh.n;
  if (k >= n) throw std::domain_error("derivative_matrix: needs k < n");
  const ElementDef& elo = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  const ElementDef& ehi = get_element(n, k + 1, r, Family::Qtilde, DofKind::Nodal);
  auto d = dual_derivatives(elo);
  // reference nodal coefficients of d psi_j in the degree-(k+1) element;
  // global coefficients are reference dual coefficients of the pullback, so
  // no physical scaling enters here (d commutes with the pullback)
  Eigen::MatrixXd dhat(ehi.dim(), elo.dim());
  for (std::size_t j = 0; j < elo.dim(); ++j) {
    auto vals = nodal_values(d[j], ehi.nodes);
    for (std::size_t i = 0; i < ehi.dim(); ++i) dhat(i, j) = vals[i];
  }

  auto map_lo = global_dofs(mesh, k, r);
  auto map_hi = global_dofs(mesh, k + 1, r);
  std::map<std::pair<int, int>, double> entries;  // shared rows agree; keep one
  auto cells = mesh.active_cells();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t i = 0; i < ehi.dim(); ++i)
      for (std::size_t j = 0; j < elo.dim(); ++j) {
        double v = dhat(i, j);
        if (v != 0.0)
          entries.emplace(std::make_pair(static_cast<int>(map_hi.local_to_global[c][i]),
                                         static_cast<int>(map_lo.local_to_global[c][j])),
                          v);
      }
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [rc, v] : entries) trips.emplace_back(rc.first, rc.second, v);
  SpMat out(static_cast<int>(map_hi.count), static_cast<int>(map_lo.count));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

namespace {

// S + B^T B on V^k; its kernel is {v : dv = 0, <v, d tau> = 0}
Eigen::MatrixXd constraint_operator(const StructuredCubicalMesh& mesh, int k, int r,
                                    std::size_t dim) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  if (k < mesh.n) h += Eigen::MatrixXd(assemble_stiffness(mesh, k, r));
  if (k >= 1) {
    Eigen::MatrixXd b = Eigen::MatrixXd(assemble_mixed(mesh, k, r));
    h += b.transpose() * b;
  }
  return h;
}

Eigen::MatrixXd m_orthonormalize(Eigen::MatrixXd q, const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2 && j > 0; ++pass) {
      Eigen::VectorXd coef = q.leftCols(j).transpose() * (m * q.col(j));
      q.col(j) -= q.leftCols(j) * coef;
    }
    q.col(j) /= std::sqrt(q.col(j).dot(m * q.col(j)));
  }
  return q;
}

Eigen::MatrixXd eigen_kernel(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double cut = 1e-8 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> kernel;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < cut) kernel.push_back(i);
  Eigen::MatrixXd q(h.rows(), kernel.size());
  for (std::size_t j = 0; j < kernel.size(); ++j)
    q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(kernel[j]);
  return q;
}

}  // namespace

SpMat pi_h_global(const StructuredCubicalMesh& mesh, int k, int r) {
  const int n = mesh.n;
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto qm = basis(Family::Qminus, n, k, r);
  // dof values of the trimmed interpolant: nodal values of the Qminus basis
  // composed with the reference interpolation coefficients
  Eigen::MatrixXd nm(e.dim(), qm.dim());
  for (std::size_t a = 0; a < qm.dim(); ++a) {
    auto vals = nodal_values(qm.basis[a], e.nodes);
    for (std::size_t i = 0; i < e.dim(); ++i)
      nm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = vals[i];
  }
  Eigen::MatrixXd local = nm * hat_pi_dual_matrix(n, k, r);

  auto map = global_dofs(mesh, k, r);
  std::map<std::pair<int, int>, double> entries;  // conforming: shared rows agree
  auto cells = mesh.active_cells();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t i = 0; i < e.dim(); ++i)
      for (std::size_t j = 0; j < e.dim(); ++j)
        if (local(i, j) != 0.0)
          entries.emplace(std::make_pair(static_cast<int>(map.local_to_global[c][i]),
                                         static_cast<int>(map.local_to_global[c][j])),
                          local(i, j));
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [rc, v] : entries) trips.emplace_back(rc.first, rc.second, v);
  SpMat out(static_cast<int>(map.count), static_cast<int>(map.count));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::MatrixXd harmonic_basis(const StructuredCubicalMesh& mesh, int k, int r) {
  const std::size_t dim = dof_count(mesh, k, r);
  // orthonormal basis of the trimmed subspace (range of the global Pi_h)
  Eigen::MatrixXd p = Eigen::MatrixXd(pi_h_global(mesh, k, r));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinU);
  const double scut = 1e-8 * svd.singularValues()(0);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > scut) ++rank;
  Eigen::MatrixXd c = svd.matrixU().leftCols(rank);

  Eigen::MatrixXd h = constraint_operator(mesh, k, r, dim);
  Eigen::MatrixXd q = c * eigen_kernel(c.transpose() * h * c);
  if (q.cols() == 0) return q;
  Eigen::MatrixXd m = Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Exact));
  return m_orthonormalize(std::move(q), m);
}

Eigen::MatrixXd closed_coclosed_basis(const StructuredCubicalMesh& mesh, int k, int r) {
  const std::size_t dim = dof_count(mesh, k, r);
  Eigen::MatrixXd q = eigen_kernel(constraint_operator(mesh, k, r, dim));
  if (q.cols() == 0) return q;
  Eigen::MatrixXd m = Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Exact));
  return m_orthonormalize(std::move(q), m);
}

Eigen::MatrixXd hat_pi_dual_matrix(int n, int k, int r) {
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  return to_dense(hat_pi_matrix(n, k, r)) * e.vandermonde_inv_d;
}

Eigen::MatrixXd coderivative_operator(const StructuredCubicalMesh& mesh, int k, int r,
                                      MassMode mode, const CoefficientField& K) {
  if (k < 1) throw std::domain_error("coderivative_operator: needs k >= 1");
  SpMat m = assemble_mass(mesh, k - 1, r, mode, K);
  SpMat b = assemble_mixed(mesh, k, r);
  Eigen::SimplicialLDLT<SpMat> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("coderivative_operator: singular mass matrix");
  return solver.solve(Eigen::MatrixXd(b));
}

LocalityReport coderivative_locality(const StructuredCubicalMesh& mesh, int k, int r,
                                     MassMode mode, const CoefficientField& K,
                                     double tol) {
  Eigen::MatrixXd c = coderivative_operator(mesh, k, r, mode, K);
  auto map_lo = global_dofs(mesh, k - 1, r);
  auto map_hi = global_dofs(mesh, k, r);
  auto cells = mesh.active_cells();
  const int n = mesh.n;

  // lattice key of the geometric node of each u-dof (c*r + node index per axis)
  const auto nodes = tensor_nodes(n, r);
  const std::size_t pts = nodes.count();
  std::vector<std::vector<long>> key_of(map_hi.count);
  for (std::size_t cell = 0; cell < cells.size(); ++cell)
    for (std::size_t l = 0; l < map_hi.local_to_global[cell].size(); ++l) {
      auto mi = nodes.multi_index(l % pts);
      std::vector<long> key(n);
      for (int i = 0; i < n; ++i)
        key[i] = static_cast<long>(cells[cell][i]) * r + mi[i];
      key_of[map_hi.local_to_global[cell][l]] = key;
    }

  LocalityReport report;
  report.columns = map_hi.count;
  report.local = true;
  for (std::size_t j = 0; j < map_hi.count; ++j) {
    // the allowed patch: sigma-dofs of every element containing the node
    std::vector<bool> allowed(map_lo.count, false);
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
      bool touches = true;
      for (int i = 0; i < n && touches; ++i) {
        long lo = static_cast<long>(cells[cell][i]) * r;
        touches = key_of[j][i] >= lo && key_of[j][i] <= lo + r;
      }
      if (touches)
        for (std::size_t g : map_lo.local_to_global[cell]) allowed[g] = true;
    }
    const double colmax = c.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff();
    if (colmax == 0.0) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < map_lo.count; ++i) {
      if (allowed[i]) continue;
      worst = std::max(worst,
                       std::abs(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
    report.worst_ratio = std::max(report.worst_ratio, worst / colmax);
    if (worst > tol * colmax) {
      ++report.violations;
      report.local = false;
    }
  }
  return report;
}

void write_coo(const SpMat& a, std::ostream& out) {
  for (int c = 0; c < a.outerSize(); ++c)
    for (SpMat::InnerIterator it(a, c); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace qtilde
