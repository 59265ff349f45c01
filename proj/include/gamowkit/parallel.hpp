#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gamowkit {

// Thread cap: GAMOWKIT_THREADS if set, else hardware concurrency.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("GAMOWKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Deterministic parallel map: each index writes only its own slot, so the
// result is identical for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned nthreads = std::min<std::size_t>(thread_cap(), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += nthreads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace gamowkit
