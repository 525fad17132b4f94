#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace relscan {

namespace detail {
inline bool& in_parallel_region() {
    thread_local bool flag = false;
    return flag;
}
}  // namespace detail

// Runs fn(i) for i in [0, count) on a small thread pool. Work items must be
// independent; writes should go to per-index slots so completion order cannot
// matter. Nested calls from inside a worker run sequentially, so composed
// layers cannot oversubscribe. The first exception thrown by any item is
// rethrown on the caller after all workers stop picking up new work.
template <typename Fn>
void parallel_for(std::size_t count, const Fn& fn) {
    if (count == 0) return;
    const unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = hw == 0 ? 1 : hw;
    if (workers > count) workers = count;
    if (workers <= 1 || detail::in_parallel_region()) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic<bool> error_claimed{false};

    auto work = [&]() {
        detail::in_parallel_region() = true;
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                if (!error_claimed.exchange(true)) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
        detail::in_parallel_region() = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace relscan
