#pragma once

#include <atomic>
#include <thread>
#include <utility>
#include <vector>

namespace seawake {

// Number of worker threads internal loops may use. Defaults to the hardware
// concurrency, capped by the SEAWAKE_THREADS environment variable when set.
int worker_count();

// Runs fn(i) for i in [begin, end). Iterations must write disjoint outputs;
// under that condition the result is bitwise identical for any thread count.
template <typename Fn>
void parallel_for(int begin, int end, Fn&& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    int workers = worker_count();
    if (workers > n) workers = n;
    if (workers <= 1 || n < 4) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int> next(begin);
    auto drain = [&]() {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= end) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

}  // namespace seawake
