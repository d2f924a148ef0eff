#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace isodisplay {

// Process-wide worker count for the embarrassingly-parallel loops (sampling
// batches, candidate certification). Results are written to per-index slots,
// so any thread count produces identical output.
int worker_threads();
void set_worker_threads(int n);

template <class Fn>
void parallel_for(size_t n, Fn&& fn) {
    int threads = worker_threads();
    if (threads <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace isodisplay
