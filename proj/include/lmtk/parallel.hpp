#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lmtk {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Work items must
// not share mutable state except through atomics; results must not depend
// on execution order.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
    if (n == 0) return;
    size_t nthreads = std::min<size_t>(std::max(workers, 1), n);
    if (nthreads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
        threads.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

} // namespace lmtk
