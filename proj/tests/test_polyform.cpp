#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qtilde/polyform.hpp"

using namespace qtilde;

namespace {

MultiIndex exps(std::initializer_list<int> e) { return MultiIndex(e); }

PolyForm random_form(std::mt19937& rng, int n, int k, int max_exp, int nterms) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> exp(0, max_exp);
  auto sigmas = enumerate_sigma(full_index_set(n), k);
  std::uniform_int_distribution<std::size_t> pick(0, sigmas.size() - 1);
  PolyForm u = zero_form(n, k);
  for (int t = 0; t < nterms; ++t) {
    MultiIndex alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = exp(rng);
    u = add(u, monomial_form(n, rat(coeff(rng), den(rng)), alpha, sigmas[pick(rng)].sigma));
  }
  return u;
}

}  // namespace

TEST_CASE("wedge basics") {
  // (x1 dx1) ^ (x2 dx2) = x1 x2 dx1^dx2
  auto a = monomial_form(2, 1, exps({1, 0}), {1});
  auto b = monomial_form(2, 1, exps({0, 1}), {2});
  CHECK(equal(wedge(a, b), monomial_form(2, 1, exps({1, 1}), {1, 2})));
  // dx1 ^ dx1 = 0
  auto dx1 = monomial_form(2, 1, exps({0, 0}), {1});
  CHECK(wedge(dx1, dx1).is_zero());
  // dx2 ^ dx1 = -dx1^dx2
  auto dx2 = monomial_form(2, 1, exps({0, 0}), {2});
  CHECK(equal(wedge(dx2, dx1), monomial_form(2, -1, exps({0, 0}), {1, 2})));
  // overflowing degree is the zero form, not an error
  auto vol = monomial_form(2, 1, exps({0, 0}), {1, 2});
  CHECK(wedge(vol, dx1).is_zero());
}

TEST_CASE("wedge is bilinear and graded anticommutative") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3;
    auto u = random_form(rng, n, 1, 2, 3);
    auto v = random_form(rng, n, 1, 2, 3);
    auto w = random_form(rng, n, 1, 2, 3);
    CHECK(equal(wedge(add(u, v), w), add(wedge(u, w), wedge(v, w))));
    CHECK(equal(wedge(u, v), scale(wedge(v, u), Rational(-1))));
    auto s = random_form(rng, n, 2, 2, 3);
    CHECK(equal(wedge(u, s), wedge(u, s)));
    CHECK(equal(wedge(wedge(u, v), w), wedge(u, wedge(v, w))));
  }
}

TEST_CASE("exterior derivative") {
  // d(x1 x2 dx1) = -x1 dx1^dx2
  auto u = monomial_form(2, 1, exps({1, 1}), {1});
  CHECK(equal(exterior_derivative(u), monomial_form(2, -1, exps({1, 0}), {1, 2})));
  // d(x1^2) = 2 x1 dx1
  auto f = monomial_form(2, 1, exps({2, 0}), {});
  CHECK(equal(exterior_derivative(f), monomial_form(2, 2, exps({1, 0}), {1})));
}

TEST_CASE("d o d = 0 and kappa o kappa = 0") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + trial % 3;
    int k = trial % (n + 1);
    auto u = random_form(rng, n, k, 3, 4);
    CHECK(exterior_derivative(exterior_derivative(u)).is_zero());
    CHECK(koszul(koszul(u)).is_zero());
  }
}

TEST_CASE("koszul explicit") {
  // kappa(dx1^dx2) = x1 dx2 - x2 dx1
  auto vol = monomial_form(2, 1, exps({0, 0}), {1, 2});
  auto want = add(monomial_form(2, 1, exps({1, 0}), {2}),
                  monomial_form(2, -1, exps({0, 1}), {1}));
  CHECK(equal(koszul(vol), want));
  // matches the sign formula over sigma-minus
  for (int n = 2; n <= 4; ++n)
    for (const auto& s : enumerate_sigma(full_index_set(n), 2)) {
      auto u = monomial_form(n, 1, MultiIndex(n, 0), s.sigma);
      PolyForm expect = zero_form(n, 1);
      for (int i : s.sigma) {
        MultiIndex a(n, 0);
        a[i - 1] = 1;
        expect = add(expect, monomial_form(n, sign_eps(i, sigma_minus(s, i)), a,
                                           sigma_minus(s, i).sigma));
      }
      CHECK(equal(koszul(u), expect));
    }
}

TEST_CASE("homotopy formula on homogeneous forms") {
  // u = x1 dx2: (kappa d + d kappa) u = 2 x1 dx2
  auto u = monomial_form(2, 1, exps({1, 0}), {2});
  auto hom = add(koszul(exterior_derivative(u)), exterior_derivative(koszul(u)));
  CHECK(equal(hom, scale(u, Rational(2))));

  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 3;
    int k = trial % (n + 1);
    auto v = random_form(rng, n, k, 3, 5);
    for (int r = 0; r <= 3 * n; ++r) {
      auto h = homogeneous_part(v, r);
      if (h.is_zero()) continue;
      auto lhs = add(koszul(exterior_derivative(h)), exterior_derivative(koszul(h)));
      CHECK(equal(lhs, scale(h, Rational(r + k))));
    }
  }
}

TEST_CASE("trace") {
  // tr_{x2=1}(x1 x2 dx1 + x1 dx2) = x1 dx1
  auto u = add(monomial_form(2, 1, exps({1, 1}), {1}), monomial_form(2, 1, exps({1, 0}), {2}));
  Face f{2, {{2, Rational(1)}}, {1}};
  CHECK(equal(trace(u, f), monomial_form_on({1}, 2, 1, exps({1, 0}), {1})));
}

TEST_CASE("trace commutes with d; kappa trace identity") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + trial % 2;
    int k = 1 + trial % 2;
    if (k > n) continue;
    auto u = random_form(rng, n, k, 3, 4);
    int fixed_label = 1 + trial % n;
    Rational c = rat(trial % 5 - 2, 1 + trial % 2);
    Face f{n, {{fixed_label, c}}, {}};
    for (int i = 1; i <= n; ++i)
      if (i != fixed_label) f.free.push_back(i);

    CHECK(equal(trace(exterior_derivative(u), f), exterior_derivative(trace(u, f))));

    // tr_f kappa u = kappa_f tr_f u + tr_f(x^f -| u)
    std::vector<Rational> xf(n, Rational(0));
    xf[fixed_label - 1] = c;
    auto lhs = trace(koszul(u), f);
    auto rhs = add(koszul(trace(u, f)), trace(contract_constant(u, xf), f));
    CHECK(equal(lhs, rhs));
  }
}

TEST_CASE("degrees") {
  IndexSet free = full_index_set(2);
  FormMonomial m{Rational(1), exps({2, 1}), {1}};
  CHECK(degrees(m, free, 2) == std::pair<int, int>{1, 0});
  CHECK(degrees(m, free, 1) == std::pair<int, int>{0, 1});
  FormMonomial dx1{Rational(1), exps({0, 0}), {1}};
  for (int s = 1; s <= 3; ++s) CHECK(degrees(dx1, free, s) == std::pair<int, int>{0, 0});
}

TEST_CASE("degree invariance under d and kappa moves") {
  // exhaustive over monomials: m' = d_i x^alpha dx_i ^ dx_sigma,
  // m'' = x^alpha x_{sigma_j} dx_{sigma - sigma_j}
  for (int n = 2; n <= 4; ++n) {
    auto free = full_index_set(n);
    for (int k = 1; k <= n - 1; ++k)
      for (const auto& sg : enumerate_sigma(free, k)) {
        int rmax = 3;
        std::vector<MultiIndex> alphas;
        MultiIndex a(n, 0);
        while (true) {
          alphas.push_back(a);
          int p = n - 1;
          while (p >= 0 && a[p] == rmax) a[p--] = 0;
          if (p < 0) break;
          ++a[p];
        }
        for (const auto& alpha : alphas) {
          FormMonomial m{Rational(1), alpha, sg.sigma};
          for (int s = 1; s <= rmax + 1; ++s) {
            auto [c_m, nc_m] = degrees(m, free, s);
            auto [c1_m, nc1_m] = degrees(m, free, s + 1);
            for (int i : sigma_complement(sg).sigma) {
              if (alpha[i - 1] == 0) continue;
              MultiIndex a2 = alpha;
              a2[i - 1] -= 1;
              FormMonomial mp{Rational(1), a2, sigma_plus(sg, i).sigma};
              auto [c_mp, nc_mp] = degrees(mp, free, s);
              auto [c1_mp, nc1_mp] = degrees(mp, free, s + 1);
              CHECK(nc_mp == nc_m - (alpha[i - 1] == s ? 1 : 0));
              CHECK(nc1_m + c_m == nc1_mp + c_mp);
            }
            for (int j : sg.sigma) {
              MultiIndex a2 = alpha;
              a2[j - 1] += 1;
              FormMonomial mpp{Rational(1), a2, sigma_minus(sg, j).sigma};
              auto [c_mpp, nc_mpp] = degrees(mpp, free, s);
              auto [c1_mpp, nc1_mpp] = degrees(mpp, free, s + 1);
              CHECK(nc_mpp == nc_m + (alpha[j - 1] == s - 1 ? 1 : 0));
              CHECK(nc1_m + c_m == nc1_mpp + c_mpp);
            }
          }
        }
      }
  }
}

TEST_CASE("cdeg does not decrease under d, ncdeg does not decrease under kappa") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 3;
    int k = 1 + trial % n;
    auto u = random_form(rng, n, k, 3, 1);
    if (u.is_zero()) continue;
    const auto& m = u.terms[0];
    for (int s = 1; s <= 4; ++s) {
      auto [cm, nm] = degrees(m, u.free, s);
      for (const auto& mt : exterior_derivative(u).terms) {
        auto [ct, nt] = degrees(mt, u.free, s);
        CHECK(ct >= cm);
      }
      for (const auto& mt : koszul(u).terms) {
        auto [ct, nt] = degrees(mt, u.free, s);
        CHECK(nt >= nm);
      }
    }
  }
}

TEST_CASE("pullback") {
  auto u = monomial_form(2, 1, exps({1, 0}), {2});
  AffineDiagonalMap id{{Rational(1), Rational(1)}, {Rational(0), Rational(0)}};
  CHECK(equal(pullback_affine(id, u), u));
  AffineDiagonalMap two{{Rational(2), Rational(2)}, {Rational(0), Rational(0)}};
  CHECK(equal(pullback_affine(two, u), scale(u, Rational(4))));
  AffineDiagonalMap bad{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
  CHECK_THROWS_AS(pullback_affine(bad, u), std::domain_error);

  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3;
    auto a = random_form(rng, n, 1, 2, 3);
    auto b = random_form(rng, n, 1, 2, 3);
    AffineDiagonalMap phi{{rat(2, 3), rat(-1), rat(5, 2)}, {rat(1, 2), rat(0), rat(-3)}};
    CHECK(equal(pullback_affine(phi, wedge(a, b)),
                wedge(pullback_affine(phi, a), pullback_affine(phi, b))));
    CHECK(equal(pullback_affine(phi, exterior_derivative(a)),
                exterior_derivative(pullback_affine(phi, a))));
  }
}

TEST_CASE("integrate_box") {
  auto vol = monomial_form(2, 1, exps({0, 0}), {1, 2});
  CHECK(integrate_box(vol, symmetric_box(2)) == 4);
  CHECK(integrate_box(monomial_form(2, 1, exps({1, 0}), {1, 2}), symmetric_box(2)) == 0);
  // independent oracle: product of 1-D moments int_{-1}^1 t^2 dt = 2/3
  Rational oracle = rat(2, 3) * rat(2, 3);
  CHECK(integrate_box(monomial_form(2, 1, exps({2, 2}), {1, 2}), symmetric_box(2)) == oracle);
  CHECK(oracle == rat(4, 9));
  CHECK_THROWS_AS(integrate_box(monomial_form(2, 1, exps({0, 0}), {1}), symmetric_box(2)),
                  std::domain_error);
}

TEST_CASE("serialization") {
  auto u = monomial_form(3, rat(3, 2), exps({2, 0, 1}), {1, 2});
  CHECK(to_string(u) == "3/2 x1^2 x3 dx1^dx2");
  CHECK(to_string(zero_form(2, 1)) == "0");
}
