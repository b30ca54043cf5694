#pragma once

// Chunked parallel sweep over an index range. Results are collected per
// chunk and merged in chunk order by the caller, so the outcome does not
// depend on the thread count.

#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

namespace psl2z::detail {

/// Calls fn(chunk, begin, end) for `threads` contiguous chunks of [0, n).
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
  auto t = static_cast<std::size_t>(threads);
  if (t > n) t = n == 0 ? 1 : n;
  if (t == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::size_t base = n / t, extra = n % t, begin = 0;
  for (std::size_t c = 0; c < t; ++c) {
    std::size_t end = begin + base + (c < extra ? 1 : 0);
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& th : pool) th.join();
}

}  // namespace psl2z::detail
