#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace glance {

/// Worker cap from GLANCE_THREADS; unset, 0 or unparsable means hardware
/// concurrency.
inline auto worker_count() -> std::size_t
{
  std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("GLANCE_THREADS"); env != nullptr && *env != '\0') {
    try {
      const unsigned long requested = std::stoul(env);
      if (requested > 0) {
        return requested;
      }
    } catch (const std::exception &) {
    }
  }
  return hw;
}

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. fn must only
/// write to slot i of its output; the first exception thrown is rethrown.
template <typename Fn> void parallel_for(std::size_t n, Fn &&fn)
{
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace glance
