#pragma once
// Minimal chunked parallel_for. Thread count is capped by the
// COHERENCE_KIT_THREADS environment variable; results must not depend on
// the chunking, so only embarrassingly parallel loops (one output slot per
// index) belong here.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <utility>
#include <vector>

namespace cohkit {

inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COHERENCE_KIT_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

// fn(i) is called exactly once for every i in [0, n); each call must write
// only to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers) {
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    parallel_for(n, std::forward<Fn>(fn), thread_budget());
}

}  // namespace cohkit
