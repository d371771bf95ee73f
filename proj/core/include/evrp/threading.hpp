#pragma once

#include <cstddef>
#include <functional>

namespace evrp {

// Runs fn(i) for i in [0, count) across up to `threads` workers with a
// static index split. Results must be written to disjoint slots so that the
// outcome is independent of the worker count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Thread count resolution: explicit request > EVRP_THREADS > hardware.
int resolve_thread_count(int requested);

}  // namespace evrp
