#pragma once

// Exhaustive minimum-cost assignment for small matrices.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Minimum total cost over all matchings of size min(rows, cols).
inline double brute_min_assignment(const std::vector<std::vector<double>>& c) {
  const std::size_t n = c.size();
  const std::size_t m = n == 0 ? 0 : c[0].size();
  if (n == 0 || m == 0) return 0.0;
  const bool wide = n <= m;
  const std::size_t small = wide ? n : m;
  const std::size_t large = wide ? m : n;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t k = 0; k < small; ++k) {
      total += wide ? c[k][perm[k]] : c[perm[k]][k];
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
