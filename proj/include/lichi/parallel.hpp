#ifndef LICHI_PARALLEL_HPP
#define LICHI_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lichi {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is split into
/// contiguous ranges; fn must not touch shared mutable state for distinct i.
/// Results must be written to per-index storage so the output is identical
/// for any thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace lichi

#endif
