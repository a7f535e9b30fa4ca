#pragma once

#include <cstddef>
#include <functional>

namespace qae {

// 0 means "use the process default" (see set_default_threads).
void set_default_threads(unsigned threads);
unsigned default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// contiguous partition. Callers write results into per-index slots and reduce
/// afterwards, so outcomes never depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace qae
