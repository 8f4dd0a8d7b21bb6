#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace viscoflow {

/// Worker cap from VISCOFLOW_THREADS (unset or invalid -> hardware concurrency).
inline std::size_t default_worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VISCOFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min(hw, static_cast<std::size_t>(v));
  }
  return hw;
}

/// Runs body(begin, end) over [0, n) split into contiguous chunks. Each index
/// is handled by exactly one worker, so as long as body only writes slot i for
/// index i the result does not depend on the worker count.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, std::size_t min_chunk, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n / std::max<std::size_t>(min_chunk, 1)));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace viscoflow
