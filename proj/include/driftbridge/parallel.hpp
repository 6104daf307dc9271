// Minimal fork-join helper. DRIFTBRIDGE_THREADS caps the worker count
// (0 or unset = hardware concurrency). Work items write to disjoint slots,
// so results are identical for any thread count.
#pragma once

#include <cstddef>
#include <functional>

namespace driftbridge {

std::size_t thread_budget();

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace driftbridge
