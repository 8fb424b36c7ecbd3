#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rp {

// Global cap on worker threads (0 = hardware concurrency). Exists so callers
// and tests can pin the thread count; results never depend on it because
// parallel loops only write per-index slots and reductions run serially.
inline std::atomic<unsigned>& max_threads() {
  static std::atomic<unsigned> v{0};
  return v;
}

inline void set_max_threads(unsigned n) { max_threads().store(n); }

// Runs fn(i) for i in [0, n) on a static partition of worker threads.
// fn must only write state owned by index i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned cap = max_threads().load();
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(cap, n);
  if (workers <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    try {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    if (lo >= n) break;
    pool.emplace_back(run_range, lo, std::min(n, lo + chunk));
  }
  run_range(0, std::min(n, chunk));
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rp
