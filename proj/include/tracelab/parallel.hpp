#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tracelab {

inline int resolve_thread_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TRACELAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Static block partition of [0, n). Workers write to disjoint preallocated
/// slots, so results do not depend on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         int threads = 0) {
    const int t = std::min<std::size_t>(resolve_thread_count(threads), n ? n : 1);
    if (t <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(t));
    const std::size_t chunk = (n + t - 1) / t;
    for (int w = 0; w < t; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace tracelab
