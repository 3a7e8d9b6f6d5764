#pragma once

#include <cstdint>
#include <functional>

namespace psbf {

/// Worker count: requested if > 0, else hardware concurrency, both capped by
/// the PSB_FACTOR_THREADS environment variable when set.
int resolve_threads(int requested);

/// Static block partition of [begin, end) over `threads` workers. Results must
/// not depend on the schedule; callers only use this for per-column work that
/// touches disjoint state.
void parallel_for(int threads, std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body);

}  // namespace psbf
