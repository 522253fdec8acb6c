#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rings::harness {

unsigned resolve_threads(unsigned requested);

/// Evaluates fn(r) for r in [0, count) on a pool of worker threads pulling
/// indices from a shared counter. Results are stored by index, so the
/// caller's fold over the returned vector does not depend on scheduling.
/// The exception of the lowest failing index is rethrown.
template <typename R, typename Fn>
std::vector<R> map_replicas(std::uint64_t count, unsigned threads, Fn&& fn) {
  std::vector<R> results(count);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), count));
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::uint64_t error_index = count;
  auto work = [&] {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= count) return;
      try {
        results[r] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (r < error_index) {
          error_index = r;
          error = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace rings::harness
