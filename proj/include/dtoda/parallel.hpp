#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dtoda {

// Thread budget for independent probes: DTODA_THREADS when set, otherwise
// the hardware count, clamped to [1, 8].
inline int probe_threads() {
  if (const char* env = std::getenv("DTODA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 8u));
}

// Ordered parallel map over [0, count); tasks must be independent.
template <class F>
void parallel_for(int count, F&& body) {
  const int workers = std::min(probe_threads(), std::max(1, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += workers) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dtoda
