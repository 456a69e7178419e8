#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace smlab {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Worker w takes
/// the contiguous block [w*count/threads, (w+1)*count/threads), so which
/// thread runs a trial never depends on timing. fn must only write state
/// owned by trial i; results are read back by index afterwards.
template <class Fn>
void parallel_trials(std::int64_t count, int threads, Fn fn) {
  threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(count, 1)));
  if (threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      const std::int64_t lo = count * w / threads, hi = count * (w + 1) / threads;
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace smlab
