#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lab {

/// Worker cap: LAB_THREADS if set, else machine parallelism.
inline unsigned worker_count() {
    if (const char* env = std::getenv("LAB_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return (unsigned)v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Index-parallel loop with deterministic output: fn(i) writes slot i only,
/// so the result is identical for any worker count.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    const unsigned workers = std::min<size_t>(worker_count(), n ? n : 1);
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lab
