#include "qtilde/ratlinalg.hpp"

#include <algorithm>
#include <cassert>

namespace qtilde {

RatMatrix rat_zeros(std::size_t rows, std::size_t cols) {
  return RatMatrix(rows, RatVector(cols, Rational(0)));
}

RatMatrix rat_identity(std::size_t m) {
  RatMatrix a = rat_zeros(m, m);
  for (std::size_t i = 0; i < m; ++i) a[i][i] = 1;
  return a;
}

std::size_t rat_rank(RatMatrix a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      Rational factor = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= factor * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVector> rat_solve(RatMatrix a, RatVector b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  assert(b.size() == rows);
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::swap(b[piv], b[rank]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rational factor = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= factor * a[rank][j];
      b[i] -= factor * b[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVector x(cols, Rational(0));
  for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

std::optional<RatMatrix> rat_inverse(RatMatrix a) {
  const std::size_t m = a.size();
  RatMatrix inv = rat_identity(m);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational d = a[col][col];
    for (std::size_t j = 0; j < m; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational factor = a[i][col];
      for (std::size_t j = 0; j < m; ++j) {
        a[i][j] -= factor * a[col][j];
        inv[i][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

std::vector<RatVector> rat_nullspace(RatMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rational factor = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= factor * a[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<RatVector> kernel;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector x(cols, Rational(0));
    x[free] = 1;
    for (std::size_t i = 0; i < rank; ++i)
      x[pivot_col[i]] = -a[i][free] / a[i][pivot_col[i]];
    kernel.push_back(std::move(x));
  }
  return kernel;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

// a/b mod p; returns false if b vanishes mod p.
bool residue(const Rational& q, u64 p, u64& out) {
  u64 num = mpz_fdiv_ui(q.get_num().get_mpz_t(), p);
  u64 den = mpz_fdiv_ui(q.get_den().get_mpz_t(), p);
  if (den == 0) return false;
  out = mulmod(num, invmod(den, p), p);
  return true;
}

}  // namespace

std::size_t rank_mod_p(const RatMatrix& a, u64 p) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::vector<std::vector<u64>> m(rows, std::vector<u64>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!residue(a[i][j], p, m[i][j])) return 0;  // bad prime, caller retries
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    u64 inv = invmod(m[rank][col], p);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (m[i][col] == 0) continue;
      u64 factor = mulmod(m[i][col], inv, p);
      for (std::size_t j = col; j < cols; ++j) {
        u64 sub = mulmod(factor, m[rank][j], p);
        m[i][j] = (m[i][j] >= sub) ? m[i][j] - sub : m[i][j] + p - sub;
      }
    }
    ++rank;
  }
  return rank;
}

bool rat_full_rank(const RatMatrix& a) {
  if (a.empty()) return true;
  const std::size_t want = std::min(a.size(), a[0].size());
  static const u64 primes[] = {2305843009213693951ULL,  // 2^61 - 1
                               1152921504606846883ULL, 576460752303423619ULL};
  for (u64 p : primes)
    if (rank_mod_p(a, p) == want) return true;
  return rat_rank(a) == want;
}

}  // namespace qtilde
