#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace polarq::app {

inline int resolve_workers(int requested, std::size_t items) {
  int w = requested > 0 ? requested : int(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(w, int(std::max<std::size_t>(items, 1))));
}

/// Evaluates f(0..count-1) on `workers` threads; results keep index order.
/// f must not throw.
template <typename F>
auto parallel_map(std::size_t count, int workers, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(count);
  const int w = resolve_workers(workers, count);
  if (w == 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = f(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t k = next++; k < count; k = next++) out[k] = f(k);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace polarq::app
