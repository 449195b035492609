#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace coverage {

/// Process-wide worker count for grid and per-agent loops (default 1).
void set_thread_count(unsigned n) noexcept;
[[nodiscard]] unsigned thread_count() noexcept;

/// Splits [0, n) into contiguous chunks and calls body(begin, end) for each,
/// joining before returning. Bodies must write disjoint outputs; results are
/// identical for any thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(std::size_t{0}, std::min(n, chunk));
}

}  // namespace coverage
