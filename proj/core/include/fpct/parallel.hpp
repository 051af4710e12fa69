#pragma once

#include <cstdint>
#include <functional>

namespace fpct {

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Work is split in
// static contiguous blocks, so every index runs exactly once and output
// written to per-index slots is independent of the worker count.
void parallel_for(int64_t n, int threads, const std::function<void(int64_t)>& fn);

int default_thread_count();

}  // namespace fpct
