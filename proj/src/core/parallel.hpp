#pragma once

#include <functional>

namespace lf {

// Worker count: explicit request if positive, else LOOPFRONT_THREADS if set and positive,
// else hardware concurrency.
int resolve_threads(int requested);

// Runs body(k) for k in [0, n) on up to `threads` workers (interleaved assignment).
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace lf
