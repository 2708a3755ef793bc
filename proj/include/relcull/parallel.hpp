#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace relcull {

/// Internal parallelism budget: hardware concurrency, capped by the
/// RELCULL_THREADS environment variable when set.
inline unsigned max_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("RELCULL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

/// Chunked parallel loop over [0, n). Each index is visited exactly once and
/// workers write disjoint slots, so results do not depend on the thread
/// count.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned workers = max_threads();
  if (n == 0) return;
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    threads.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace relcull
