#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace spinekit {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{0};
  return n;
}

// Set inside pool workers so nested parallel loops run inline instead of
// oversubscribing the machine.
inline bool& in_worker() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

// 0 restores the default (hardware concurrency).
inline void set_thread_count(unsigned n) { detail::thread_setting().store(n); }

inline unsigned thread_count() {
  if (detail::in_worker()) return 1;
  const unsigned n = detail::thread_setting().load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into contiguous chunks, one per worker, and calls
// fn(begin, end, worker) for each. Chunk boundaries depend only on n and the
// worker count, so callers merging per-worker results in worker order get a
// deterministic reduction.
template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn, std::size_t min_chunk = 64) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * step);
    const std::size_t e = std::min(n, b + step);
    pool.emplace_back([&, b, e, w] {
      detail::in_worker() = true;
      try {
        fn(b, e, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

inline std::size_t chunk_workers(std::size_t n, std::size_t min_chunk = 64) {
  return std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n / std::max<std::size_t>(1, min_chunk)));
}

}  // namespace spinekit
