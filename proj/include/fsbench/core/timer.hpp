#pragma once

#include <algorithm>
#include <chrono>

namespace fsbench {

using SteadyClock = std::chrono::steady_clock;

/// Elapsed wall seconds, floored at 1 ns so recorded runtimes are positive.
inline double elapsed_seconds(SteadyClock::time_point start) {
    const std::chrono::duration<double> d = SteadyClock::now() - start;
    return std::max(d.count(), 1e-9);
}

} // namespace fsbench
