#pragma once

#include <cstddef>
#include <functional>

namespace ddh {

// 0 means "all hardware threads".
unsigned resolve_threads(unsigned requested);

// Calls fn(i) for every i in [0, n) split into contiguous static chunks, one
// per thread. fn must only write to state owned by index i, so the result is
// independent of the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace ddh
