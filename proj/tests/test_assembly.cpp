#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qtilde/assembly.hpp"

using namespace qtilde;

namespace {

StructuredCubicalMesh reference_cell(int n) {
  StructuredCubicalMesh mesh;
  mesh.n = n;
  mesh.cells.assign(n, 1);
  mesh.spacing.assign(n, Rational(2));
  mesh.origin.assign(n, Rational(-1));
  mesh.mask.assign(1, true);
  return mesh;
}

// lumped product on the reference cell for explicit forms
double lumped_product_ref(const PolyForm& u, const PolyForm& v, int r) {
  auto nodes = tensor_nodes(u.n, r);
  double total = 0;
  for (const auto& sm : enumerate_sigma(full_index_set(u.n), u.k)) {
    total += eval_full(
        [&](const std::vector<double>& x) {
          return eval_component(u, sm.sigma, x) * eval_component(v, sm.sigma, x);
        },
        nodes);
  }
  return total;
}

PolyForm rationalized(const Eigen::VectorXd& coeffs, const std::vector<PolyForm>& basis) {
  PolyForm out = zero_form(basis[0].n, basis[0].k);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    Rational c(coeffs(i));
    if (c != 0) out = add(out, scale(basis[i], c));
  }
  return out;
}

}  // namespace

TEST_CASE("one-dimensional lumping on a single cell") {
  auto mesh = reference_cell(1);
  auto lumped = Eigen::MatrixXd(assemble_mass(mesh, 0, 1, MassMode::Lumped));
  REQUIRE(lumped.rows() == 2);
  CHECK(lumped(0, 0) == doctest::Approx(1.0));
  CHECK(lumped(1, 1) == doctest::Approx(1.0));
  CHECK(lumped(0, 1) == doctest::Approx(0.0));
  auto exact = Eigen::MatrixXd(assemble_mass(mesh, 0, 1, MassMode::Exact));
  CHECK(exact(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(exact(0, 1) == doctest::Approx(1.0 / 3));
  // classical 1-D lumping: lumped diagonal equals exact row sums
  for (int i = 0; i < 2; ++i)
    CHECK(exact.row(i).sum() == doctest::Approx(lumped(i, i)));
}

TEST_CASE("mass matrices are SPD; lumped is diagonal for identity K") {
  for (auto [n, k, r] : {std::array<int, 3>{2, 1, 1}, {2, 1, 2}, {2, 2, 2}, {3, 1, 1}}) {
    auto mesh = unit_cube_mesh(n, 2);
    for (auto mode : {MassMode::Exact, MassMode::Lumped}) {
      auto m = Eigen::MatrixXd(assemble_mass(mesh, k, r, mode));
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      CHECK(es.eigenvalues()(0) > 0);
      if (mode == MassMode::Lumped) {
        Eigen::MatrixXd offdiag = m - m.diagonal().asDiagonal().toDenseMatrix();
        CHECK(offdiag.cwiseAbs().maxCoeff() <= 1e-13 * m.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("lumped mass with mixing coefficients is block diagonal by node") {
  const int n = 2, k = 1, r = 2;
  auto mesh = unit_cube_mesh(n, 2);
  auto K = random_spd_coefficient(mesh, k, 1234);
  auto m = Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Lumped, K));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues()(0) > 0);
  auto map = global_dofs(mesh, k, r);
  double outside = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (map.node_group[i] != map.node_group[j])
        outside = std::max(outside, std::abs(m(i, j)));
  CHECK(outside <= 1e-13 * m.cwiseAbs().maxCoeff());
}

TEST_CASE("reference quadrature product is exact on Qminus x Q_{r-1}") {
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (int r = 1; r <= (n == 2 ? 3 : 2); ++r) {
        auto qm = basis(Family::Qminus, n, k, r);
        auto ql = basis(Family::Q, n, k, r - 1);
        Box box = symmetric_box(n);
        for (const auto& u : qm.basis)
          for (const auto& v : ql.basis) {
            double exact = to_double(inner_product_box(u, v, box));
            double lumped = lumped_product_ref(u, v, r);
            CHECK(std::abs(exact - lumped) <= 1e-12 * (1 + std::abs(exact)));
          }
      }
}

TEST_CASE("discrete derivative complex: D_{k+1} after D_k vanishes") {
  auto mesh = unit_cube_mesh(2, 2);
  for (int r = 1; r <= 2; ++r) {
    auto d0 = Eigen::MatrixXd(derivative_matrix(mesh, 0, r));
    auto d1 = Eigen::MatrixXd(derivative_matrix(mesh, 1, r));
    CHECK((d1 * d0).cwiseAbs().maxCoeff() <= 1e-11);
  }
  auto mesh3 = unit_cube_mesh(3, 2);
  auto d0 = Eigen::MatrixXd(derivative_matrix(mesh3, 0, 1));
  auto d1 = Eigen::MatrixXd(derivative_matrix(mesh3, 1, 1));
  auto d2 = Eigen::MatrixXd(derivative_matrix(mesh3, 2, 1));
  CHECK((d1 * d0).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((d2 * d1).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("mixed matrix is the mass-weighted derivative") {
  // <d tau_i, v_j> must equal (D^T M)_{ij}
  auto mesh = unit_cube_mesh(2, 2);
  for (int r = 1; r <= 2; ++r) {
    auto b = Eigen::MatrixXd(assemble_mixed(mesh, 1, r));
    auto d = Eigen::MatrixXd(derivative_matrix(mesh, 0, r));
    auto m = Eigen::MatrixXd(assemble_mass(mesh, 1, r, MassMode::Exact));
    CHECK((b - d.transpose() * m).cwiseAbs().maxCoeff() <=
          1e-11 * m.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("closed forms give vanishing rows of B") {
  const int n = 2, r = 2;
  auto mesh = unit_cube_mesh(n, 2);
  auto b = Eigen::MatrixXd(assemble_mixed(mesh, 1, r));
  auto map = global_dofs(mesh, 0, r);
  // the constant 0-form has all nodal values one and d = 0
  Eigen::VectorXd tau = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(map.count));
  CHECK((tau.transpose() * b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stiffness kernel on a contractible mesh, k = 0") {
  auto mesh = unit_cube_mesh(2, 2);
  auto s = Eigen::MatrixXd(assemble_stiffness(mesh, 0, 2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  int zero_modes = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 1e-8 * es.eigenvalues().cwiseAbs().maxCoeff()) ++zero_modes;
  CHECK(zero_modes == 1);
}

TEST_CASE("harmonic dimensions follow the topology") {
  auto square = unit_cube_mesh(2, 3);
  auto annulus = mesh_from_json(R"({
    "dim": 2, "cells": [3, 3], "spacing": ["1/3", "1/3"],
    "mask": [[1,1,1],[1,0,1],[1,1,1]]})");
  for (int r = 1; r <= 2; ++r) {
    CHECK(harmonic_basis(square, 1, r).cols() == 0);
    CHECK(harmonic_basis(annulus, 1, r).cols() == 1);
    CHECK(harmonic_basis(square, 0, r).cols() == 1);
    CHECK(harmonic_basis(annulus, 0, r).cols() == 1);
  }
  // two cells meeting only at a corner: two connected components
  auto split = mesh_from_json(R"({"dim": 2, "cells": [2, 2], "mask": [[1,0],[0,1]]})");
  CHECK(harmonic_basis(split, 0, 1).cols() == 2);

  // residual checks: dq = 0 and <q, d tau> = 0
  auto q = harmonic_basis(annulus, 1, 2);
  auto d1 = Eigen::MatrixXd(derivative_matrix(annulus, 1, 2));
  auto b = Eigen::MatrixXd(assemble_mixed(annulus, 1, 2));
  CHECK((d1 * q).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((b * q).cwiseAbs().maxCoeff() <= 1e-8);
  auto m = Eigen::MatrixXd(assemble_mass(annulus, 1, 2, MassMode::Exact));
  CHECK(std::abs(q.col(0).dot(m * q.col(0)) - 1.0) <= 1e-10);
}

TEST_CASE("global trimmed interpolation per cell") {
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  for (auto [n, k, r] : {std::array<int, 3>{2, 1, 1}, {2, 1, 2}, {2, 2, 2}}) {
    auto mesh = unit_cube_mesh(n, 2);
    const auto& elem = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
    auto qm = basis(Family::Qminus, n, k, r);
    auto map = global_dofs(mesh, k, r);
    Eigen::MatrixXd pi = hat_pi_dual_matrix(n, k, r);
    auto wtest = basis(Family::Q, n, k, r - 1);  // Q_{r-1}^d weights per cell

    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd u(static_cast<Eigen::Index>(map.count));
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(rng);
      for (std::size_t c = 0; c < map.local_to_global.size(); ++c) {
        Eigen::VectorXd uloc(static_cast<Eigen::Index>(elem.dim()));
        for (std::size_t i = 0; i < elem.dim(); ++i)
          uloc(static_cast<Eigen::Index>(i)) = u(static_cast<Eigen::Index>(map.local_to_global[c][i]));
        // reference restriction of u and of Pi_h u on this cell
        Eigen::VectorXd mono = elem.vandermonde_inv_d * uloc;
        PolyForm uhat = rationalized(mono, elem.shape.basis);
        PolyForm pihat = rationalized(pi * uloc, qm.basis);
        PolyForm res = sub(uhat, pihat);
        // d(u - Pi_h u) = 0
        PolyForm dres = exterior_derivative(res);
        for (const auto& t : dres.terms) CHECK(std::abs(to_double(t.coeff)) <= 1e-11);
        // lumped orthogonality to the broken Q_{r-1} space
        for (const auto& v : wtest.basis)
          CHECK(std::abs(lumped_product_ref(res, v, r)) <= 1e-11);
      }
    }
    // identity on trimmed shape functions
    for (const auto& v : qm.basis) {
      auto vals = nodal_values(v, elem.nodes);
      Eigen::VectorXd loc(static_cast<Eigen::Index>(vals.size()));
      for (std::size_t i = 0; i < vals.size(); ++i) loc(static_cast<Eigen::Index>(i)) = vals[i];
      PolyForm back = rationalized(pi * loc, qm.basis);
      PolyForm diff = sub(back, v);
      for (const auto& t : diff.terms) CHECK(std::abs(to_double(t.coeff)) <= 1e-11);
    }
  }
}

TEST_CASE("coderivative locality") {
  auto mesh = unit_cube_mesh(2, 4);
  for (int r = 1; r <= 2; ++r) {
    auto lumped = coderivative_locality(mesh, 2, r, MassMode::Lumped);
    CHECK(lumped.local);
    CHECK(lumped.violations == 0);
    auto exact = coderivative_locality(mesh, 2, r, MassMode::Exact);
    CHECK_FALSE(exact.local);
    CHECK(exact.violations > 0);
  }
  // with mixing coefficients the node blocks couple, so a column reaches the
  // sigma-dofs at every node of the cells containing the u-dof; verify that
  // one-ring confinement directly
  auto K = random_spd_coefficient(mesh, 1, 2026);
  auto c = coderivative_operator(mesh, 2, 1, MassMode::Lumped, K);
  auto map_lo = global_dofs(mesh, 1, 1);
  auto map_hi = global_dofs(mesh, 2, 1);
  auto cells = mesh.active_cells();
  auto nodes = tensor_nodes(2, 1);
  const std::size_t pts = nodes.count();
  auto keys = [&](const GlobalDofMap& map) {
    std::vector<std::vector<long>> out(map.count);
    for (std::size_t cl = 0; cl < cells.size(); ++cl)
      for (std::size_t l = 0; l < map.local_to_global[cl].size(); ++l) {
        auto mi = nodes.multi_index(l % pts);
        out[map.local_to_global[cl][l]] = {cells[cl][0] + mi[0], cells[cl][1] + mi[1]};
      }
    return out;
  };
  auto key_lo = keys(map_lo), key_hi = keys(map_hi);
  double outside = 0;
  for (std::size_t cl = 0; cl < cells.size(); ++cl)
    for (std::size_t j : map_hi.local_to_global[cl]) {
      for (std::size_t i = 0; i < map_lo.count; ++i) {
        bool in_ring = std::abs(key_lo[i][0] - key_hi[j][0]) <= 1 &&
                       std::abs(key_lo[i][1] - key_hi[j][1]) <= 1;
        if (!in_ring)
          outside = std::max(outside, std::abs(c(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(j))));
      }
    }
  CHECK(outside <= 1e-12 * c.cwiseAbs().maxCoeff());
}

TEST_CASE("zero pairing implies zero coderivative") {
  auto mesh = unit_cube_mesh(2, 2);
  auto c = coderivative_operator(mesh, 2, 1, MassMode::Lumped);
  auto b = Eigen::MatrixXd(assemble_mixed(mesh, 2, 1));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() > 0) CHECK((c * kernel).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("coefficient validation") {
  auto mesh = unit_cube_mesh(2, 2);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;  // symmetric but indefinite
  CHECK_THROWS_AS(assemble_mass(mesh, 1, 1, MassMode::Lumped, constant_coefficient(mesh, bad)),
                  std::domain_error);
  Eigen::MatrixXd nonsym(2, 2);
  nonsym << 1, 1, 0, 1;
  CHECK_THROWS_AS(
      assemble_mass(mesh, 1, 1, MassMode::Exact, constant_coefficient(mesh, nonsym)),
      std::domain_error);
}
