#pragma once

#include <cstddef>
#include <functional>

namespace adjoint_fp {

/// Worker count for node loops: ADJOINT_FP_THREADS if set, otherwise the
/// hardware concurrency. Always at least 1.
std::size_t thread_count();

/// Calls body(begin, end) on disjoint chunks of [0, n). Chunks never share
/// output slots, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 8192);

}  // namespace adjoint_fp
