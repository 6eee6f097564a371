#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace grank {

/// Runs fn(i) for i in [0, count) across `threads` workers. Indices are handed
/// out through an atomic counter; with threads <= 1 everything runs inline.
/// The first exception wins and is rethrown after all workers join, so callers
/// must make fn's writes disjoint per index.
inline void parallel_for(std::uint64_t count, std::uint32_t threads,
                         const std::function<void(std::uint64_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };
    const std::uint32_t n =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(threads, count));
    {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (std::uint32_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace grank
