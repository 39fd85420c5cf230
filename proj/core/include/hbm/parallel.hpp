#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hbm {

/// Worker count: HBM_WORKERS if set and positive, otherwise the hardware
/// concurrency (at least 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("HBM_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/// Run body(i) for i in [0, count) on worker_count() threads.  body must be
/// safe to call concurrently for distinct i.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> counter{0};
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = counter.fetch_add(1);
                if (i >= count) break;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hbm
