#pragma once

#include <cstdint>
#include <functional>

namespace scb {

// Worker count resolution: explicit argument > SCB_THREADS env > hardware.
int default_thread_count();

// Runs fn(i) for i in [begin, end). Work is split into contiguous blocks, one
// per worker; fn must write only to per-index slots so the result is
// independent of scheduling. threads <= 0 selects the default count.
void parallel_for(std::int64_t begin, std::int64_t end, const std::function<void(std::int64_t)>& fn,
                  int threads = 0);

}  // namespace scb
