#include "qtilde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qtilde/assembly.hpp"
#include "qtilde/quadrature.hpp"
#include "qtilde/refelem.hpp"
#include "qtilde/spaces.hpp"

namespace qtilde {

bool SuiteReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::size_t SuiteReport::failures() const {
  std::size_t f = 0;
  for (const auto& c : checks)
    if (!c.pass) ++f;
  return f;
}

namespace {

long ipow(long b, int e) {
  long out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

std::string triple(int n, int k, int r) {
  std::ostringstream os;
  os << "n=" << n << " k=" << k << " r=" << r;
  return os.str();
}

bool contains_form(const SpaceBasis& s, const PolyForm& u) {
  return membership(u, s).has_value();
}

// (n, r) pairs of the dimension / unisolvency sweep
std::vector<std::pair<int, int>> sweep_params() {
  std::vector<std::pair<int, int>> out;
  for (int n = 1; n <= 3; ++n)
    for (int r = 1; r <= 3; ++r) out.emplace_back(n, r);
  for (int r = 1; r <= 2; ++r) out.emplace_back(4, r);
  return out;
}

// all exponent vectors with entries in [0, cap]
std::vector<MultiIndex> all_alphas(int n, int cap) {
  std::vector<MultiIndex> out;
  MultiIndex a(n, 0);
  while (true) {
    out.push_back(a);
    int p = n - 1;
    while (p >= 0 && a[p] == cap) a[p--] = 0;
    if (p < 0) break;
    ++a[p];
  }
  return out;
}

// lumped quadrature product of two explicit forms on the reference box
double lumped_product_ref(const PolyForm& u, const PolyForm& v, int r) {
  auto nodes = tensor_nodes(u.n, r);
  double total = 0;
  for (const auto& sm : enumerate_sigma(full_index_set(u.n), u.k))
    total += eval_full(
        [&](const std::vector<double>& x) {
          return eval_component(u, sm.sigma, x) * eval_component(v, sm.sigma, x);
        },
        nodes);
  return total;
}

PolyForm rationalized(const Eigen::VectorXd& coeffs,
                      const std::vector<PolyForm>& basis_forms) {
  PolyForm out = zero_form(basis_forms[0].n, basis_forms[0].k);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    Rational c(coeffs(i));
    if (c != 0) out = add(out, scale(basis_forms[i], c));
  }
  return out;
}

}  // namespace

SuiteReport verify_dimensions() {
  SuiteReport report{"dimensions", {}};
  for (auto [n, r] : sweep_params())
    for (int k = 0; k <= n; ++k) {
      const long expected = binomial(n, k) * ipow(r + 1, n);
      auto qt = basis(Family::Qtilde, n, k, r);
      CheckResult c;
      c.name = "dim " + triple(n, k, r);
      c.value = static_cast<double>(qt.dim());
      c.bound = static_cast<double>(expected);
      c.pass = static_cast<long>(qt.dim()) == expected &&
               space_dimension(Family::Qtilde, n, k, r) == expected &&
               rat_full_rank(coordinate_matrix(qt.basis));
      c.detail = "basis rank certified exactly";
      report.checks.push_back(c);
    }
  return report;
}

SuiteReport verify_unisolvency(int n, int k, int r) {
  SuiteReport report{"unisolvency", {}};
  CheckResult moment;
  moment.name = "moment " + triple(n, k, r);
  try {
    auto e = build_element(n, k, r, Family::Qtilde, DofKind::Moment, false);
    moment.pass = true;
    moment.value = static_cast<double>(e.dim());
    moment.detail = "Vandermonde exactly invertible";
  } catch (const std::exception& ex) {
    moment.pass = false;
    moment.detail = ex.what();
  }
  report.checks.push_back(moment);

  CheckResult nodal;
  nodal.name = "nodal " + triple(n, k, r);
  nodal.bound = 1e12;
  try {
    auto e = build_element(n, k, r, Family::Qtilde, DofKind::Nodal, false);
    nodal.value = e.condition;
    nodal.pass = e.condition < nodal.bound;
    nodal.detail = "condition number";
  } catch (const std::exception& ex) {
    nodal.pass = false;
    nodal.detail = ex.what();
  }
  report.checks.push_back(nodal);
  return report;
}

SuiteReport verify_unisolvency_sweep() {
  SuiteReport report{"unisolvency", {}};
  for (auto [n, r] : sweep_params())
    for (int k = 0; k <= n; ++k) {
      auto single = verify_unisolvency(n, k, r);
      report.checks.insert(report.checks.end(), single.checks.begin(),
                           single.checks.end());
    }
  return report;
}

SuiteReport verify_algebra(unsigned seed) {
  SuiteReport report{"algebra", {}};

  // homotopy formula (kappa d + d kappa) u = (deg + k) u, exhaustive over
  // monomial forms with exponents <= 2
  {
    long bad = 0, total = 0;
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k <= n; ++k)
        for (const auto& sg : enumerate_sigma(full_index_set(n), k))
          for (const auto& alpha : all_alphas(n, 2)) {
            auto u = monomial_form(n, 1, alpha, sg.sigma);
            int deg = 0;
            for (int a : alpha) deg += a;
            auto lhs = add(koszul(exterior_derivative(u)),
                           exterior_derivative(koszul(u)));
            if (!equal(lhs, scale(u, Rational(deg + k)))) ++bad;
            ++total;
          }
    report.checks.push_back({"homotopy-formula", bad == 0,
                             static_cast<double>(bad), 0.0,
                             std::to_string(total) + " monomial forms, exact"});
  }

  // degree invariance of the d / kappa monomial moves, exhaustive
  {
    long bad = 0, total = 0;
    for (int n = 2; n <= 4; ++n) {
      auto free = full_index_set(n);
      for (int k = 1; k <= n - 1; ++k)
        for (const auto& sg : enumerate_sigma(free, k))
          for (const auto& alpha : all_alphas(n, 3))
            for (int s = 1; s <= 4; ++s) {
              FormMonomial m{Rational(1), alpha, sg.sigma};
              auto [c_m, nc_m] = degrees(m, free, s);
              auto [c1_m, nc1_m] = degrees(m, free, s + 1);
              for (int i : sigma_complement(sg).sigma) {
                if (alpha[i - 1] == 0) continue;
                MultiIndex a2 = alpha;
                a2[i - 1] -= 1;
                FormMonomial mp{Rational(1), a2, sigma_plus(sg, i).sigma};
                auto [c_mp, nc_mp] = degrees(mp, free, s);
                auto [c1_mp, nc1_mp] = degrees(mp, free, s + 1);
                if (nc_mp != nc_m - (alpha[i - 1] == s ? 1 : 0)) ++bad;
                if (nc1_m + c_m != nc1_mp + c_mp) ++bad;
                ++total;
              }
              for (int j : sg.sigma) {
                MultiIndex a2 = alpha;
                a2[j - 1] += 1;
                FormMonomial mpp{Rational(1), a2, sigma_minus(sg, j).sigma};
                auto [c_mpp, nc_mpp] = degrees(mpp, free, s);
                auto [c1_mpp, nc1_mpp] = degrees(mpp, free, s + 1);
                if (nc_mpp != nc_m + (alpha[j - 1] == s - 1 ? 1 : 0)) ++bad;
                if (nc1_m + c_m != nc1_mpp + c_mpp) ++bad;
                ++total;
              }
            }
    }
    report.checks.push_back({"degree-invariance", bad == 0,
                             static_cast<double>(bad), 0.0,
                             std::to_string(total) + " monomial moves, exact"});
  }

  // epsilon sign identity, exhaustive through n = 5
  {
    long bad = 0, total = 0;
    for (int n = 2; n <= 5; ++n) {
      auto ambient = full_index_set(n);
      for (int k = 1; k <= n - 1; ++k) {
        auto sigmas = enumerate_sigma(ambient, k);
        for (const auto& s : sigmas)
          for (const auto& t : sigmas) {
            if (s == t) continue;
            for (int i : sigma_complement(s).sigma) {
              if (!t.contains(i)) continue;
              for (int ti : sigma_complement(t).sigma) {
                if (!s.contains(ti)) continue;
                if (!(sigma_plus(s, i) == sigma_plus(t, ti))) continue;
                int lhs = sign_eps(i, s) * sign_eps(i, sigma_minus(t, i));
                int rhs = sign_eps(ti, t) * sign_eps(ti, sigma_minus(s, ti));
                if (lhs + rhs != 0) ++bad;
                ++total;
              }
            }
          }
      }
    }
    report.checks.push_back({"eps-identity", bad == 0, static_cast<double>(bad),
                             0.0, std::to_string(total) + " sign pairs, exact"});
  }

  // inclusions between the families under kappa and d
  {
    long bad = 0, total = 0;
    for (int n = 2; n <= 3; ++n)
      for (int r = 1; r <= 2; ++r)
        for (int k = 0; k <= n; ++k) {
          auto q = basis(Family::Q, n, k, r);
          auto qm = basis(Family::Qminus, n, k, r);
          auto bb = basis(Family::B, n, k, r);
          if (k >= 1) {
            auto qm_lower = basis(Family::Qminus, n, k - 1, r);
            auto qt = basis(Family::Qtilde, n, k, r);
            for (const auto& u : qm.basis) {
              if (!contains_form(qm_lower, koszul(u))) ++bad;
              ++total;
            }
            for (const auto& u : q.basis) {
              if (!contains_form(qt, exterior_derivative(koszul(u)))) ++bad;
              ++total;
            }
          }
          if (k < n) {
            auto b_up = basis(Family::B, n, k + 1, r);
            auto qt_up = basis(Family::Qtilde, n, k + 1, r);
            for (const auto& m : bb.basis) {
              if (!contains_form(b_up, exterior_derivative(m))) ++bad;
              ++total;
            }
            for (const auto& u : q.basis) {
              if (!contains_form(qt_up, exterior_derivative(u))) ++bad;
              ++total;
            }
          }
        }
    report.checks.push_back({"inclusions", bad == 0, static_cast<double>(bad),
                             0.0,
                             std::to_string(total) + " membership checks, exact"});
  }

  // d kappa is injective on B: exact rank equals the dimension
  {
    long bad = 0, total = 0;
    for (int n = 2; n <= 3; ++n)
      for (int k = 1; k <= n; ++k)
        for (int r = 1; r <= 2; ++r) {
          auto bb = basis(Family::B, n, k, r);
          std::vector<PolyForm> image;
          for (const auto& m : bb.basis)
            image.push_back(exterior_derivative(koszul(m)));
          if (rat_rank(coordinate_matrix(image)) != bb.dim()) ++bad;
          ++total;
        }
    report.checks.push_back({"dkappa-injective", bad == 0,
                             static_cast<double>(bad), 0.0,
                             std::to_string(total) + " exact rank checks"});
  }

  // closure under 200 random diagonal affine pullbacks: each trial maps a
  // random rational combination of the basis plus one random basis form
  {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> coeff(-3, 3);
    long bad = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
      int n = 2 + trial % 2;
      int r = 1 + (trial / 2) % 2;
      std::uniform_int_distribution<int> pick_k(0, n);
      int k = pick_k(rng);
      auto qt = basis(Family::Qtilde, n, k, r);
      AffineDiagonalMap phi;
      for (int i = 0; i < n; ++i) {
        int a = 0;
        while (a == 0) a = num(rng);
        phi.scale.push_back(rat(a, den(rng)));
        phi.shift.push_back(rat(num(rng), den(rng)));
      }
      PolyForm combo = zero_form(n, k);
      for (const auto& u : qt.basis) combo = add(combo, scale(u, rat(coeff(rng))));
      if (!contains_form(qt, pullback_affine(phi, combo))) ++bad;
      std::uniform_int_distribution<std::size_t> pick(0, qt.dim() - 1);
      if (!contains_form(qt, pullback_affine(phi, qt.basis[pick(rng)]))) ++bad;
    }
    report.checks.push_back({"pullback-closure", bad == 0,
                             static_cast<double>(bad), 0.0,
                             std::to_string(trials) + " random maps, exact"});
  }

  // traces on every codimension-one face stay in the face space
  {
    long bad = 0, total = 0;
    for (int n = 2; n <= 3; ++n)
      for (int k = 0; k <= n - 1; ++k)
        for (int r = 1; r <= 2; ++r) {
          auto qt = basis(Family::Qtilde, n, k, r);
          for (const Face& f : box_faces(n, n - 1)) {
            auto qtf = basis_on(Family::Qtilde, f.free, n, k, r);
            for (const auto& u : qt.basis) {
              if (!membership(trace(u, f), qtf).has_value()) ++bad;
              ++total;
            }
          }
        }
    report.checks.push_back({"trace-property", bad == 0,
                             static_cast<double>(bad), 0.0,
                             std::to_string(total) + " face traces, exact"});
  }

  return report;
}

SuiteReport verify_legendre(int max_r) {
  SuiteReport report{"legendre", {}};
  for (int r = 1; r <= max_r; ++r) {
    auto lp = legendre_family(r + 1, LegendreKind::Standard);
    auto lm = legendre_family(r - 1, LegendreKind::Standard);
    auto rule = gauss_lobatto(r);
    double worst = 0;
    for (double xi : rule.nodes)
      worst = std::max(worst, std::abs(poly1d_eval(lp, xi) - poly1d_eval(lm, xi)));
    CheckResult c;
    c.name = "legendre r=" + std::to_string(r);
    c.value = worst;
    c.bound = 1e-13;
    c.pass = worst <= c.bound;
    c.detail = "max |L_{r+1} - L_{r-1}| over the nodes";
    report.checks.push_back(c);
  }
  return report;
}

SuiteReport verify_conditions(int n, int k, int r) {
  SuiteReport report{"conditions", {}};

  // exactness of the quadrature product on Qminus x Q_{r-1}
  {
    auto qm = basis(Family::Qminus, n, k, r);
    auto ql = basis(Family::Q, n, k, r - 1);
    Box box = symmetric_box(n);
    double worst = 0;
    for (const auto& u : qm.basis)
      for (const auto& v : ql.basis) {
        double exact = to_double(inner_product_box(u, v, box));
        double lumped = lumped_product_ref(u, v, r);
        worst = std::max(worst, std::abs(exact - lumped) / (1 + std::abs(exact)));
      }
    report.checks.push_back({"quadrature-exactness " + triple(n, k, r),
                             worst <= 1e-12, worst, 1e-12,
                             "max |<u,v> - <u,v>_h| over the pair basis"});
  }

  // d-preservation and lumped orthogonality of the trimmed interpolation,
  // on random conforming fields of a 2-per-axis mesh
  {
    auto mesh = unit_cube_mesh(n, 2);
    const auto& elem = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
    auto qm = basis(Family::Qminus, n, k, r);
    auto wtest = basis(Family::Q, n, k, r - 1);
    auto map = global_dofs(mesh, k, r);
    Eigen::MatrixXd pi = hat_pi_dual_matrix(n, k, r);
    std::mt19937 rng(7177);
    std::normal_distribution<double> gauss;

    double worst_d = 0, worst_orth = 0;
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd u(static_cast<Eigen::Index>(map.count));
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(rng);
      for (std::size_t c = 0; c < map.local_to_global.size(); ++c) {
        Eigen::VectorXd uloc(static_cast<Eigen::Index>(elem.dim()));
        for (std::size_t i = 0; i < elem.dim(); ++i)
          uloc(static_cast<Eigen::Index>(i)) =
              u(static_cast<Eigen::Index>(map.local_to_global[c][i]));
        PolyForm uhat = rationalized(elem.vandermonde_inv_d * uloc, elem.shape.basis);
        PolyForm pihat = rationalized(pi * uloc, qm.basis);
        PolyForm res = sub(uhat, pihat);
        for (const auto& t : exterior_derivative(res).terms)
          worst_d = std::max(worst_d, std::abs(to_double(t.coeff)));
        for (const auto& v : wtest.basis)
          worst_orth = std::max(worst_orth, std::abs(lumped_product_ref(res, v, r)));
      }
    }
    report.checks.push_back({"pi-d-preservation " + triple(n, k, r),
                             worst_d <= 1e-11, worst_d, 1e-11,
                             "coefficients of d(u - Pi_h u), random fields"});
    report.checks.push_back({"pi-quadrature-orthogonality " + triple(n, k, r),
                             worst_orth <= 1e-11, worst_orth, 1e-11,
                             "<u - Pi_h u, v>_h against broken Q_{r-1}"});
  }

  // norm-equivalence ratio c2/c1 of the quadrature product, stable across
  // refinements (generalized eigenvalues of the lumped vs exact mass)
  {
    std::vector<int> sizes = (n <= 2) ? std::vector<int>{2, 4, 8}
                                      : std::vector<int>{1, 2, 4};
    std::vector<double> ratios;
    for (int cells : sizes) {
      auto mesh = unit_cube_mesh(n, cells);
      Eigen::MatrixXd mh =
          Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Lumped));
      Eigen::MatrixXd m = Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Exact));
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(mh, m);
      ratios.push_back(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    double drift = (hi - lo) / lo;
    std::ostringstream detail;
    detail << "c2/c1 per level:";
    for (double c : ratios) detail << " " << c;
    report.checks.push_back({"norm-equivalence-stability " + triple(n, k, r),
                             drift <= 0.05, drift, 0.05, detail.str()});
  }

  return report;
}

SuiteReport verify_locality(int r) {
  SuiteReport report{"locality", {}};
  auto mesh = unit_cube_mesh(2, 4);
  auto lumped = coderivative_locality(mesh, 2, r, MassMode::Lumped);
  report.checks.push_back(
      {"lumped-local r=" + std::to_string(r), lumped.local && lumped.violations == 0,
       lumped.worst_ratio, 1e-12,
       std::to_string(lumped.columns) + " columns confined to the node patch"});
  auto exact = coderivative_locality(mesh, 2, r, MassMode::Exact);
  report.checks.push_back(
      {"exact-nonlocal r=" + std::to_string(r), !exact.local && exact.violations > 0,
       static_cast<double>(exact.violations), 1.0,
       "columns with support beyond the node patch (expected > 0)"});
  return report;
}

SuiteReport verify_harmonic() {
  SuiteReport report{"harmonic", {}};
  auto square = unit_cube_mesh(2, 3);
  auto annulus = mesh_from_json(R"({
    "dim": 2, "cells": [3, 3], "spacing": ["1/3", "1/3"],
    "mask": [[1,1,1],[1,0,1],[1,1,1]]})");
  for (int r = 1; r <= 2; ++r) {
    auto full = harmonic_basis(square, 1, r);
    report.checks.push_back({"square k=1 r=" + std::to_string(r), full.cols() == 0,
                             static_cast<double>(full.cols()), 0.0,
                             "trivial first cohomology"});
    auto hole = harmonic_basis(annulus, 1, r);
    report.checks.push_back({"annulus k=1 r=" + std::to_string(r), hole.cols() == 1,
                             static_cast<double>(hole.cols()), 1.0,
                             "one hole, one harmonic field"});
  }
  return report;
}

}  // namespace qtilde
