#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lf {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LOOPFRONT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    const int T = std::max(1, std::min(resolve_threads(threads), n));
    if (T == 1) {
        for (int k = 0; k < n; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < T; ++w)
        pool.emplace_back([&] {
            for (int k = next++; k < n; k = next++) {
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace lf
