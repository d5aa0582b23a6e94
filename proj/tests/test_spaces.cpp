#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qtilde/spaces.hpp"

using namespace qtilde;

namespace {

bool contains_form(const SpaceBasis& S, const PolyForm& u) {
  return membership(u, S).has_value();
}

}  // namespace

TEST_CASE("Qminus and B bases for n=2, k=1, r=1") {
  auto qm = basis(Family::Qminus, 2, 1, 1);
  REQUIRE(qm.dim() == 4);
  // {dx1, x2 dx1, dx2, x1 dx2}
  CHECK(to_string(qm.basis[0]) == "dx1");
  CHECK(to_string(qm.basis[1]) == "x2 dx1");
  CHECK(to_string(qm.basis[2]) == "dx2");
  CHECK(to_string(qm.basis[3]) == "x1 dx2");

  auto bb = basis(Family::B, 2, 1, 1);
  REQUIRE(bb.dim() == 4);
  CHECK(to_string(bb.basis[0]) == "x1 dx1");
  CHECK(to_string(bb.basis[1]) == "x1 x2 dx1");
  CHECK(to_string(bb.basis[2]) == "x2 dx2");
  CHECK(to_string(bb.basis[3]) == "x1 x2 dx2");
}

TEST_CASE("dimension formulas and direct sum") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (int r = 1; r <= 3; ++r) {
        auto q = basis(Family::Q, n, k, r);
        auto qm = basis(Family::Qminus, n, k, r);
        auto bb = basis(Family::B, n, k, r);
        CHECK(static_cast<long>(q.dim()) == space_dimension(Family::Q, n, k, r));
        CHECK(q.dim() == qm.dim() + bb.dim());
        // union of bases has full rank
        std::vector<PolyForm> joint = qm.basis;
        joint.insert(joint.end(), bb.basis.begin(), bb.basis.end());
        CHECK(rat_full_rank(coordinate_matrix(joint)));
      }
}

TEST_CASE("Qtilde basis") {
  auto qt = basis(Family::Qtilde, 2, 1, 1);
  CHECK(qt.dim() == 8);
  // contains d kappa (x1 x2 dx1) = 2 x1 x2 dx1 + x1^2 dx2
  auto target = add(monomial_form(2, 2, {1, 1}, {1}), monomial_form(2, 1, {2, 0}, {2}));
  CHECK(contains_form(qt, target));

  CHECK(basis(Family::Qtilde, 3, 1, 2).dim() == 81);

  // k = 0 and k = n: Qtilde spans the same space as Q
  for (int n = 1; n <= 3; ++n)
    for (int r = 1; r <= 2; ++r)
      for (int k : {0, n}) {
        auto qt2 = basis(Family::Qtilde, n, k, r);
        auto q = basis(Family::Q, n, k, r);
        CHECK(qt2.dim() == q.dim());
        for (const auto& u : q.basis) CHECK(contains_form(qt2, u));
      }
}

TEST_CASE("membership") {
  auto q0 = basis(Family::Q, 2, 0, 2);
  CHECK(contains_form(q0, monomial_form(2, 1, {0, 0}, {})));
  auto q1 = basis(Family::Q, 2, 1, 2);
  CHECK_FALSE(contains_form(q1, monomial_form(2, 1, {3, 0}, {2})));
  auto qt = basis(Family::Qtilde, 2, 1, 2);
  for (const auto& m : basis(Family::B, 2, 1, 2).basis)
    CHECK(contains_form(qt, exterior_derivative(koszul(m))));
  // membership returns exact coordinates
  auto coords = membership(qt.basis[3], qt);
  REQUIRE(coords.has_value());
  PolyForm recon = zero_form(2, 1);
  for (std::size_t j = 0; j < qt.dim(); ++j)
    recon = add(recon, scale(qt.basis[j], (*coords)[j]));
  CHECK(equal(recon, qt.basis[3]));
}

TEST_CASE("inclusions") {
  for (int n = 2; n <= 3; ++n)
    for (int r = 1; r <= 2; ++r)
      for (int k = 0; k <= n; ++k) {
        auto q = basis(Family::Q, n, k, r);
        auto qm = basis(Family::Qminus, n, k, r);
        auto bb = basis(Family::B, n, k, r);
        if (k >= 1) {
          auto qm_lower = basis(Family::Qminus, n, k - 1, r);
          for (const auto& u : qm.basis) CHECK(contains_form(qm_lower, koszul(u)));
        }
        if (k < n) {
          auto b_up = basis(Family::B, n, k + 1, r);
          auto qt_up = basis(Family::Qtilde, n, k + 1, r);
          std::vector<PolyForm> dkb_up;
          for (const auto& m : b_up.basis) dkb_up.push_back(exterior_derivative(koszul(m)));
          SpaceBasis dkb{Family::B, n, k + 1, r, full_index_set(n), dkb_up};
          for (const auto& m : bb.basis) {
            auto dm = exterior_derivative(m);
            CHECK(contains_form(b_up, dm));
            CHECK(contains_form(dkb, dm));
          }
          for (const auto& u : q.basis)
            CHECK(contains_form(qt_up, exterior_derivative(u)));
        }
        if (k >= 1) {
          auto qt = basis(Family::Qtilde, n, k, r);
          for (const auto& u : q.basis)
            CHECK(contains_form(qt, exterior_derivative(koszul(u))));
        }
      }
}

TEST_CASE("d kappa is injective on B (rank argument)") {
  for (int n = 2; n <= 3; ++n)
    for (int k = 1; k <= n; ++k)
      for (int r = 1; r <= 2; ++r) {
        auto bb = basis(Family::B, n, k, r);
        std::vector<PolyForm> image;
        for (const auto& m : bb.basis) image.push_back(exterior_derivative(koszul(m)));
        CHECK(rat_rank(coordinate_matrix(image)) == bb.dim());
      }
}

TEST_CASE("Qtilde closed under diagonal affine pullback") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) {
      auto qt = basis(Family::Qtilde, n, k, 2);
      for (int trial = 0; trial < 4; ++trial) {
        AffineDiagonalMap phi;
        for (int i = 0; i < n; ++i) {
          int a = 0;
          while (a == 0) a = num(rng);
          phi.scale.push_back(rat(a, den(rng)));
          phi.shift.push_back(rat(num(rng), den(rng)));
        }
        for (const auto& u : qt.basis) CHECK(contains_form(qt, pullback_affine(phi, u)));
      }
    }
}

TEST_CASE("subcomplex property: d Qtilde^k inside Qtilde^{k+1}") {
  for (int n = 2; n <= 3; ++n)
    for (int r = 1; r <= 2; ++r)
      for (int k = 0; k < n; ++k) {
        auto qt = basis(Family::Qtilde, n, k, r);
        auto qt_up = basis(Family::Qtilde, n, k + 1, r);
        for (const auto& u : qt.basis)
          CHECK(contains_form(qt_up, exterior_derivative(u)));
      }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(basis(Family::Q, 2, 3, 1), std::domain_error);
  CHECK_THROWS_AS(basis(Family::Q, 2, 1, -1), std::domain_error);
  // r = 0 is allowed for the plain families (Q_{r-1} weight spaces at
  // r = 1) but not for Qtilde itself
  CHECK(basis(Family::Q, 2, 1, 0).dim() == 2);
  CHECK_THROWS_AS(basis(Family::Qtilde, 2, 1, 0), std::domain_error);
}
