#pragma once

#include <cstddef>
#include <functional>

namespace hjdisc {

/// Worker count resolved from HJDISC_THREADS (0 or unset = hardware auto).
int worker_count();

/// Deterministic parallel loop over [0, n): the range is split into
/// contiguous chunks, one per worker, so writes to disjoint slots never
/// race and the result does not depend on scheduling.
/// Falls back to a serial loop when only one worker is available.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace hjdisc
