#pragma once

#include <Eigen/Core>

#include <vector>

namespace sridge {

/// Calls fn(const std::vector<Index>&) for every size-r subset of [0, n) in
/// lexicographic order. Stops early if fn returns false.
template <class Fn>
void for_each_combination(Eigen::Index n, Eigen::Index r, Fn&& fn) {
  using Index = Eigen::Index;
  if (r < 0 || r > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<Index>&>(idx))) return;
    Index i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < r; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace sridge
