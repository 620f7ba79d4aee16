#pragma once

#include <cstddef>
#include <functional>

namespace odeco {

// Worker count resolution: an explicit request wins, otherwise the
// ODECO_SPECTRA_THREADS environment variable, otherwise the hardware count.
int resolve_thread_count(int requested);

// Runs fn(i) for i in [0, count). With more than one worker, indices are
// handed out through an atomic counter; results must be written to
// preallocated per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace odeco
