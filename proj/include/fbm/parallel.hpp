#pragma once

// Deterministic parallel sample loop.
//
// Samples write into preallocated per-sample slots and the caller reduces
// them sequentially afterwards, so the floating-point result is independent
// of the thread count.  FBM_EXIT_THREADS caps the worker pool; unset or 0
// means hardware concurrency.

#include <cstdlib>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fbm {

inline unsigned thread_budget() {
    if (const char* env = std::getenv("FBM_EXIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, count) across the thread budget with a static
// block partition.  Exceptions are captured and rethrown on the caller.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), count == 0 ? 1 : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = count * w / workers;
            const std::size_t hi = count * (w + 1) / workers;
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fbm
