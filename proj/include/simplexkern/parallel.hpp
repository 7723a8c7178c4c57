#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace simplexkern {

// Worker cap: SIMPLEX_KERNELS_THREADS if set, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("SIMPLEX_KERNELS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(shard) for shard = 0..num_shards-1 across at most thread_count()
// workers. The shard layout is fixed, so results are independent of how many
// threads actually run; callers merge per-shard results in shard order.
template <class Fn>
void for_each_shard(unsigned num_shards, Fn&& fn) {
  unsigned workers = std::min(thread_count(), num_shards);
  if (workers <= 1) {
    for (unsigned s = 0; s < num_shards; ++s) fn(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (unsigned s = w; s < num_shards; s += workers) fn(s);
    });
  }
  for (auto& t : pool) t.join();
}

constexpr unsigned kMonteCarloShards = 16;

}  // namespace simplexkern
