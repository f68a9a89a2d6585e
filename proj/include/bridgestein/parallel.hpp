#pragma once

// Replica-level parallelism. Each replica derives its own RNG stream from
// (seed, replica index) and writes to its own slot, so results are identical
// for any thread count. BRIDGE_STEIN_THREADS caps the pool.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bridgestein {

inline unsigned max_threads() {
  if (const char* env = std::getenv("BRIDGE_STEIN_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(replica) for replica in [0, n), in parallel.
inline void parallel_replicas(std::size_t n,
                              const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      std::min<std::size_t>(max_threads(), n > 0 ? n : 1);
  if (workers <= 1) {
    for (std::size_t r = 0; r < n; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t r = cursor.fetch_add(1);
        if (r >= n) return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bridgestein
