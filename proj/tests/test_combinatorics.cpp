#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qtilde/combinatorics.hpp"
#include "qtilde/polyform.hpp"

using namespace qtilde;

TEST_CASE("enumerate_sigma basics") {
  auto maps = enumerate_sigma({1, 2, 3}, 2);
  REQUIRE(maps.size() == 3);
  CHECK(maps[0].sigma == IndexSet{1, 2});
  CHECK(maps[1].sigma == IndexSet{1, 3});
  CHECK(maps[2].sigma == IndexSet{2, 3});

  auto empty = enumerate_sigma({1, 2, 3}, 0);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].sigma.empty());

  CHECK(enumerate_sigma({1, 2, 3, 4}, 2).size() == 6);  // binomial oracle C(4,2)
  CHECK_THROWS_AS(enumerate_sigma({1, 2}, 3), std::domain_error);
}

TEST_CASE("cardinality matches binomial for all small cases") {
  for (int n = 0; n <= 6; ++n) {
    auto ambient = full_index_set(n);
    for (int k = 0; k <= n; ++k)
      CHECK(enumerate_sigma(ambient, k).size() == static_cast<std::size_t>(binomial(n, k)));
  }
}

TEST_CASE("sigma_ops") {
  IndexMap s{{1, 3}, {1, 2, 3}};
  CHECK(sigma_complement(s).sigma == IndexSet{2});
  CHECK(sigma_minus(s, 3).sigma == IndexSet{1});
  IndexMap s4{{1, 3}, {1, 2, 3, 4}};
  CHECK(sigma_plus(s4, 2).sigma == IndexSet{1, 2, 3});
  CHECK_THROWS_AS(sigma_minus(s, 2), std::domain_error);
  CHECK_THROWS_AS(sigma_plus(s, 3), std::domain_error);
}

TEST_CASE("complement is an involution") {
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; k <= n; ++k)
      for (const auto& s : enumerate_sigma(full_index_set(n), k))
        CHECK(sigma_complement(sigma_complement(s)) == s);
}

TEST_CASE("sign_eps") {
  CHECK(sign_eps(2, IndexMap{{1, 3}, {1, 2, 3}}) == -1);
  CHECK(sign_eps(4, IndexMap{{1, 3}, {1, 2, 3, 4}}) == 1);
  CHECK(sign_eps(1, IndexMap{{}, {1, 2}}) == 1);
  CHECK_THROWS_AS(sign_eps(1, IndexMap{{1, 3}, {1, 2, 3}}), std::domain_error);
}

TEST_CASE("dx_i ^ dx_sigma = eps(i, sigma) dx_{sigma+i}") {
  for (int n = 1; n <= 4; ++n) {
    auto ambient = full_index_set(n);
    for (int k = 0; k < n; ++k)
      for (const auto& s : enumerate_sigma(ambient, k))
        for (int i : sigma_complement(s).sigma) {
          MultiIndex zero(n, 0);
          auto lhs = wedge(monomial_form(n, 1, zero, {i}), monomial_form(n, 1, zero, s.sigma));
          auto rhs = monomial_form(n, sign_eps(i, s), zero, sigma_plus(s, i).sigma);
          CHECK(equal(lhs, rhs));
        }
  }
}

TEST_CASE("eps identity, exhaustive n <= 5") {
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
              CHECK(lhs - rhs != 0);
            }
          }
        }
    }
  }
}
