#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace polydens::detail {

/// Splits [lo, hi) into `threads` contiguous chunks, runs fn(chunk_lo,
/// chunk_hi) for each on its own thread and returns the results in chunk
/// order, so callers can merge deterministically regardless of scheduling.
template <class Fn>
auto run_chunks(std::int64_t lo, std::int64_t hi, unsigned threads, Fn fn) {
  using Result = decltype(fn(lo, hi));
  if (threads == 0) threads = 1;
  const std::int64_t span = hi > lo ? hi - lo : 0;
  const auto chunk_count =
      static_cast<std::size_t>(std::min<std::int64_t>(threads, std::max<std::int64_t>(span, 1)));
  std::vector<Result> results(chunk_count);
  if (chunk_count == 1) {
    results[0] = fn(lo, hi);
    return results;
  }
  std::vector<std::exception_ptr> errors(chunk_count);
  std::vector<std::thread> workers;
  workers.reserve(chunk_count);
  for (std::size_t c = 0; c < chunk_count; ++c) {
    const std::int64_t a = lo + span * static_cast<std::int64_t>(c) / static_cast<std::int64_t>(chunk_count);
    const std::int64_t b = lo + span * static_cast<std::int64_t>(c + 1) / static_cast<std::int64_t>(chunk_count);
    workers.emplace_back([&, a, b, c] {
      try {
        results[c] = fn(a, b);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace polydens::detail
