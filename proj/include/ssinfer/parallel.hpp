#pragma once

#include <functional>

namespace ssinfer {

/// Runs body(i) for i in [0, n). With threads <= 1 the loop is plain serial.
/// Work items must be independent and write only to their own slots; callers
/// derive any randomness from per-index seeds, so results do not depend on
/// the thread count.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace ssinfer
