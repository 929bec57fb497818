#pragma once

#include <cstddef>
#include <functional>

namespace spinscale {

// Worker count: explicit CLI value if set, else SPINSCALE_WORKERS, else the
// hardware concurrency.
int default_workers();
void set_default_workers(int workers);

// Static block partition of [0, n) over at most `workers` threads. Each index
// writes only its own output slot, so results are identical for any worker
// count; used everywhere determinism across --workers values is required.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  parallel_for(n, default_workers(), fn);
}

}  // namespace spinscale
