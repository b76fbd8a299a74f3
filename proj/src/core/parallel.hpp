#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace lpscma {

// Process-wide worker cap (0 = hardware concurrency). Set once by the CLI /
// C API before heavy calls; reductions below are order-independent so the
// cap never changes results.
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};
  return cap;
}

inline int effective_threads(int64_t work_items) {
  int cap = thread_cap().load();
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int t = cap > 0 ? std::min(cap, hw) : hw;
  if (work_items < 2 * t) t = std::max<int64_t>(1, work_items / 2);
  return std::max(1, t);
}

// Static chunking over [0,n): fn(chunk_index, begin, end). Results must be
// merged per chunk by the caller to stay deterministic.
inline void parallel_chunks(int64_t n, const std::function<void(int, int64_t, int64_t)>& fn) {
  if (n <= 0) return;
  int t = effective_threads(n);
  if (t == 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  int64_t per = (n + t - 1) / t;
  for (int c = 0; c < t; ++c) {
    int64_t b = c * per;
    int64_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back([&fn, c, b, e] { fn(c, b, e); });
  }
  for (auto& th : pool) th.join();
}

inline int num_chunks(int64_t n) { return n <= 0 ? 0 : effective_threads(n); }

}  // namespace lpscma
