#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace overlap {

inline unsigned effective_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw != 0 ? hw : 1;
}

/// How [0, n) is split across workers. Callers that keep per-chunk state can
/// size it with `workers` and address it with `chunk_index(begin)`.
struct ChunkPlan {
  std::size_t workers = 1;
  std::size_t chunk_size = 1;

  static ChunkPlan make(std::size_t n, unsigned jobs) {
    ChunkPlan plan;
    plan.workers = std::max<std::size_t>(
        std::min<std::size_t>(effective_jobs(jobs), n), 1);
    plan.chunk_size = (n + plan.workers - 1) / plan.workers;
    if (plan.chunk_size == 0) plan.chunk_size = 1;
    return plan;
  }

  std::size_t chunk_index(std::size_t begin) const { return begin / chunk_size; }
};

/// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `jobs`
/// threads (0 = all cores). fn must only touch chunk-local state; the first
/// exception thrown by any chunk is rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned jobs, Fn&& fn) {
  if (n == 0) return;
  const ChunkPlan plan = ChunkPlan::make(n, jobs);
  if (plan.workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(plan.workers);
  for (std::size_t w = 0; w < plan.workers; ++w) {
    std::size_t begin = w * plan.chunk_size;
    std::size_t end = std::min(begin + plan.chunk_size, n);
    if (begin >= end) break;
    threads.emplace_back([&fn, &errors, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace overlap
