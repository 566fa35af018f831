#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace apsym {

/// Run fn(i) for i in [0, n) over `workers` threads, contiguous blocks.
/// fn must only write to per-index state; results are then independent of
/// the worker count. The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(std::uint64_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::uint64_t w = std::min<std::uint64_t>(workers, n);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::uint64_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      const std::uint64_t lo = n * t / w;
      const std::uint64_t hi = n * (t + 1) / w;
      try {
        for (std::uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Number of i in [0, n) with pred(i); a commutative sum of per-block counts.
template <class Pred>
std::uint64_t parallel_count(std::uint64_t n, unsigned workers, Pred&& pred) {
  workers = std::max(1u, workers);
  const std::uint64_t w = std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1));
  std::vector<std::uint64_t> counts(w, 0);
  parallel_for(w, static_cast<unsigned>(w), [&](std::uint64_t t) {
    const std::uint64_t lo = n * t / w;
    const std::uint64_t hi = n * (t + 1) / w;
    std::uint64_t c = 0;
    for (std::uint64_t i = lo; i < hi; ++i) c += pred(i) ? 1 : 0;
    counts[t] = c;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

}  // namespace apsym
