#pragma once

#include <cstddef>
#include <functional>

namespace fsmr {

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Each index runs
/// exactly once; the first exception thrown by any call is rethrown here.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace fsmr
