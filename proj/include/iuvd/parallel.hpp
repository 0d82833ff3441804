#pragma once

#include <cstddef>
#include <functional>

namespace iuvd {

// Worker cap used by every parallel loop in the library. 0 means hardware
// concurrency. Results never depend on this value.
void set_thread_count(int threads);
int thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited exactly once; callers write only to per-index outputs.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& body,
                         std::size_t min_chunk = 256);

template <typename F>
void parallel_for(std::size_t n, F&& body, std::size_t min_chunk = 256) {
  parallel_for_chunks(
      n,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) body(i);
      },
      min_chunk);
}

}  // namespace iuvd
