#pragma once

// Minimal fork-join loop. Work item i always writes only to slot i of the
// caller's output, so results never depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "frametight/linalg.hpp"

namespace frametight {

/// requested > 0 wins; otherwise FRAME_TIGHTEN_THREADS; otherwise the
/// hardware concurrency (at least 1).
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRAME_TIGHTEN_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

template <class Body>
void parallel_for(Index count, int threads, Body&& body) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<Index>(std::max(1, threads), count));
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (Index i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace frametight
