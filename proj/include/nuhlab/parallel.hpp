#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace nuhlab {

/// Static partition of [0, n) over `workers` threads. Results must be
/// written to per-index slots; the partition is deterministic so any worker
/// count produces the same outputs.
inline void parallel_for(int n, int workers,
                         const std::function<void(int)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace nuhlab
