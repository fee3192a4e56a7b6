// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_UTIL_PARALLEL_HPP
#define GAPSLICE_UTIL_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace gapslice {

/// Resolves a worker-count request: 0 means "use hardware concurrency".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(chunk, begin, end) over [0, n) split into contiguous chunks,
/// one per worker. Chunk boundaries depend only on (n, workers); callers
/// that need worker-count-independent output must make each per-index
/// result a pure function of the index (see util/hash.hpp) and merge the
/// per-chunk results in chunk order.
template <typename Fn>
void parallel_chunks(uint64_t n, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    fn(0u, uint64_t{0}, n);
    return;
  }
  unsigned chunks = workers;
  if (static_cast<uint64_t>(chunks) > n) chunks = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  uint64_t base = n / chunks, rem = n % chunks, begin = 0;
  for (unsigned c = 0; c < chunks; ++c) {
    uint64_t len = base + (c < rem ? 1 : 0);
    uint64_t end = begin + len;
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

/// Map-reduce over [0, n): each chunk produces a local vector<T> in index
/// order, and the chunks are concatenated in chunk order, so the result is
/// identical for every worker count.
template <typename T, typename Fn>
std::vector<T> parallel_collect(uint64_t n, unsigned workers, Fn&& per_index) {
  workers = resolve_workers(workers);
  unsigned chunks = workers;
  if (static_cast<uint64_t>(chunks) > n && n > 0) chunks = static_cast<unsigned>(n);
  if (chunks == 0) chunks = 1;
  std::vector<std::vector<T>> parts(chunks);
  parallel_chunks(n, workers, [&](unsigned c, uint64_t begin, uint64_t end) {
    auto& out = parts[c];
    for (uint64_t i = begin; i < end; ++i) per_index(i, out);
  });
  std::vector<T> merged;
  size_t total = 0;
  for (auto& p : parts) total += p.size();
  merged.reserve(total);
  for (auto& p : parts)
    for (auto& v : p) merged.push_back(std::move(v));
  return merged;
}

}  // namespace gapslice

#endif  // GAPSLICE_UTIL_PARALLEL_HPP
