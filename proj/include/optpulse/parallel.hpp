#pragma once

// Deterministic index-parallel loop: work item i is a pure function of i and
// results land in slot i, so output is identical for any worker count.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace optpulse {

inline unsigned default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

inline void parallel_for_index(std::size_t count, unsigned workers,
                               const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

}  // namespace optpulse
