#include "qtilde/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtilde {

bool IndexMap::contains(int label) const {
  return std::binary_search(sigma.begin(), sigma.end(), label);
}

bool operator==(const IndexMap& a, const IndexMap& b) {
  return a.sigma == b.sigma && a.ambient == b.ambient;
}

IndexSet full_index_set(int n) {
  IndexSet s(n);
  for (int i = 0; i < n; ++i) s[i] = i + 1;
  return s;
}

bool is_strictly_increasing(const IndexSet& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] >= s[i]) return false;
  return true;
}

bool is_subset(const IndexSet& sub, const IndexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

std::vector<IndexMap> enumerate_sigma(const IndexSet& ambient, int k) {
  const int m = static_cast<int>(ambient.size());
  if (k < 0 || k > m) throw std::domain_error("enumerate_sigma: k out of range");
  std::vector<IndexMap> out;
  std::vector<int> pick(k);
  // Lexicographic enumeration of k-subsets by position.
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    IndexMap map;
    map.ambient = ambient;
    map.sigma.reserve(k);
    for (int i = 0; i < k; ++i) map.sigma.push_back(ambient[pick[i]]);
    out.push_back(std::move(map));
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

IndexMap sigma_complement(const IndexMap& sigma) {
  IndexMap out;
  out.ambient = sigma.ambient;
  std::set_difference(sigma.ambient.begin(), sigma.ambient.end(), sigma.sigma.begin(),
                      sigma.sigma.end(), std::back_inserter(out.sigma));
  return out;
}

IndexMap sigma_minus(const IndexMap& sigma, int i) {
  if (!sigma.contains(i)) throw std::domain_error("sigma_minus: i not in sigma");
  IndexMap out;
  out.ambient = sigma.ambient;
  for (int l : sigma.sigma)
    if (l != i) out.sigma.push_back(l);
  return out;
}

IndexMap sigma_plus(const IndexMap& sigma, int j) {
  if (sigma.contains(j)) throw std::domain_error("sigma_plus: j already in sigma");
  if (!std::binary_search(sigma.ambient.begin(), sigma.ambient.end(), j))
    throw std::domain_error("sigma_plus: j not in ambient set");
  IndexMap out = sigma;
  out.sigma.insert(std::upper_bound(out.sigma.begin(), out.sigma.end(), j), j);
  return out;
}

int sign_eps(int i, const IndexMap& sigma) {
  if (sigma.contains(i)) throw std::domain_error("sign_eps: i in sigma");
  int l = static_cast<int>(std::lower_bound(sigma.sigma.begin(), sigma.sigma.end(), i) -
                           sigma.sigma.begin());
  return (l % 2 == 0) ? 1 : -1;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qtilde
