#pragma once
// Static block-partitioned parallel loop. Work items own derived RNG streams
// and write to per-index slots, so results are identical for any thread count.

#include <thread>
#include <vector>

namespace lgas {

template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2 * threads) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const long chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long begin = t * chunk;
        const long end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (long i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace lgas
