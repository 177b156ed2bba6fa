#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace philab {

/// Number of worker threads; 0 means "all hardware threads".
struct Execution {
  int threads = 0;

  int resolved() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Runs body(i) for i in [0, count) on a static partition of workers.
/// Each index is written by exactly one worker, so callers that store
/// per-index results and reduce in index order get bit-identical output
/// for any thread count. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, const Execution& exec, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(exec.resolved()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace philab
