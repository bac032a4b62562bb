#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace leedecay {

// Worker cap from the environment; 0 means "no cap".
inline unsigned max_workers_from_env() {
    const char* raw = std::getenv("LEEDECAY_MAX_WORKERS");
    if (raw == nullptr) return 0;
    const long v = std::strtol(raw, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 1;
}

// Runs fn(i) for i in [0, n) on a small thread pool. Results must be written
// to per-index slots by the caller, which keeps output independent of the
// worker count. The first exception wins and is rethrown after join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    if (n == 0) return;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    const unsigned cap = max_workers_from_env();
    if (cap != 0 && cap < workers) workers = cap;
    if (workers > n) workers = static_cast<unsigned>(n);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex guard;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace leedecay
