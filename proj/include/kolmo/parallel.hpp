#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace kolmo {

namespace detail {

inline std::atomic<unsigned> &thread_cap()
{
    static std::atomic<unsigned> cap{[] {
        if (const char *env = std::getenv("KOLMO_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }()};
    return cap;
}

} // namespace detail

/// Upper bound on worker threads used by parallel loops. Defaults to
/// KOLMO_THREADS or the hardware concurrency.
inline unsigned max_threads() { return detail::thread_cap().load(); }

inline void set_max_threads(unsigned n) { detail::thread_cap().store(std::max(1u, n)); }

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// callers write into preallocated slots and reduce afterwards in a fixed
/// order, so results do not depend on the thread count.
template <typename Body>
void parallel_for(std::size_t count, Body &&body)
{
    const std::size_t workers =
        std::min<std::size_t>(max_threads(), count / 64 + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace kolmo
