// Increasing index maps and the sign epsilon(i, sigma) behind all of the
// exterior-algebra bookkeeping.  Coordinate labels are 1-based.

#ifndef QTILDE_COMBINATORICS_HPP
#define QTILDE_COMBINATORICS_HPP

#include <vector>

namespace qtilde {

// Strictly increasing sequence of coordinate labels drawn from {1..n}.
using IndexSet = std::vector<int>;

// An element of Sigma_k(f): an increasing selection sigma from an ambient
// label set.  sigma is a subset of ambient, both strictly increasing.
struct IndexMap {
  IndexSet sigma;
  IndexSet ambient;

  int k() const { return static_cast<int>(sigma.size()); }
  bool contains(int label) const;
};

bool operator==(const IndexMap& a, const IndexMap& b);

IndexSet full_index_set(int n);

bool is_strictly_increasing(const IndexSet& s);
bool is_subset(const IndexSet& sub, const IndexSet& super);

// All C(|ambient|, k) increasing maps, lexicographic.  This ordering is the
// canonical one used for basis and matrix layouts everywhere downstream.
std::vector<IndexMap> enumerate_sigma(const IndexSet& ambient, int k);

// sigma* : the complement of sigma within its ambient set.
IndexMap sigma_complement(const IndexMap& sigma);

// sigma - i, i in [[sigma]].
IndexMap sigma_minus(const IndexMap& sigma, int i);

// sigma + j, j in [[sigma*]].
IndexMap sigma_plus(const IndexMap& sigma, int j);

// epsilon(i, sigma) = (-1)^l with l = |{ j in [[sigma]] : j < i }|.
// Requires i not in [[sigma]].
int sign_eps(int i, const IndexMap& sigma);

long binomial(int n, int k);

}  // namespace qtilde

#endif
