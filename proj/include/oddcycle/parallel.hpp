#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace oddcycle {

// Process-wide cap on worker threads; 0 means "all available cores".
void set_thread_limit(unsigned threads) noexcept;
unsigned thread_limit() noexcept;

// Runs fn(i) for every i in [begin, end) on up to thread_limit() workers.
// Indices are claimed dynamically; callers write into per-index slots and
// reduce afterwards, so results never depend on the schedule. The first
// exception thrown by any fn is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
    if (begin >= end) {
        return;
    }
    const std::size_t count = end - begin;
    const std::size_t workers = std::min<std::size_t>(thread_limit(), count);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{begin};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (std::size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(end);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(body);
    }
    body();
    for (auto& thread : pool) {
        thread.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace oddcycle
