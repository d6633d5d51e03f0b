// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_PARALLEL_HPP
#define HEATKERN_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace heatkern {

// Worker count resolution: explicit request, else HEATKERN_THREADS, else 1.
inline int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char *env = std::getenv("HEATKERN_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) {
      return parsed;
    }
  }
  return 1;
}

// Indexed parallel map with per-index result slots. The caller reduces the
// returned vector in index order, so results are bit-stable across worker
// counts.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int threads, Fn &&fn) {
  std::vector<T> results(count);
  const int workers = std::min<std::size_t>(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      results[i] = fn(i);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        results[i] = fn(i);
      }
    });
  }
  for (std::thread &t : pool) {
    t.join();
  }
  return results;
}

} // namespace heatkern

#endif
