// Dense linear algebra over the rationals: rank, solve, inverse.
//
// Matrices here are small (reference-element scale).  For the larger
// full-rank certifications we also provide a modular rank: full rank mod a
// prime implies full rank over Q, so the conclusion stays exact while the
// arithmetic stays in machine words.

#ifndef QTILDE_RATLINALG_HPP
#define QTILDE_RATLINALG_HPP

#include <optional>
#include <vector>

#include "qtilde/rational.hpp"

namespace qtilde {

using RatMatrix = std::vector<std::vector<Rational>>;
using RatVector = std::vector<Rational>;

RatMatrix rat_zeros(std::size_t rows, std::size_t cols);
RatMatrix rat_identity(std::size_t m);

std::size_t rat_rank(RatMatrix a);

// Solves A x = b exactly.  Returns nullopt if the system is inconsistent;
// for rank-deficient consistent systems free variables are set to zero.
std::optional<RatVector> rat_solve(RatMatrix a, RatVector b);

// Returns nullopt if the matrix is singular.
std::optional<RatMatrix> rat_inverse(RatMatrix a);

// Basis of the right null space {x : A x = 0}, one vector per free column.
std::vector<RatVector> rat_nullspace(RatMatrix a);

// Rank of the matrix reduced mod p.  Always a lower bound for the rational
// rank; equality holds unless p divides a pivot that is nonzero over Q.
std::size_t rank_mod_p(const RatMatrix& a, std::uint64_t p);

// Certified rational rank == min(rows, cols)?  Tries a few large primes and
// falls back to exact elimination if every modular attempt is deficient.
bool rat_full_rank(const RatMatrix& a);

}  // namespace qtilde

#endif
