#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace famdyn {

// Runs fn(i) for every i in [0, n) using up to `workers` threads.
// Indices are split into contiguous blocks and each call may write only to
// state owned by its own index, so results are identical for any worker
// count. Reductions over the results must scan indices in order.
template <class Fn>
void parallel_for_index(std::size_t n, unsigned workers, Fn&& fn) {
  if (n == 0) return;
  std::size_t w = std::max(1u, workers);
  w = std::min<std::size_t>(w, n);
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (n + w - 1) / w;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace famdyn
