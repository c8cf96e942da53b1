#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cliffcut {

// Worker-pool width: CLIFFCUT_THREADS if set, else hardware concurrency.
inline int default_thread_count() {
    if (const char* env = std::getenv("CLIFFCUT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) {
            return v;
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(0..n_tasks-1) on up to `threads` workers (0 = default width).
// Tasks must be independent; the first thrown exception is rethrown to the
// caller after all workers finish.
inline void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        threads = default_thread_count();
    }
    threads = std::min(threads, n_tasks);
    if (threads <= 1) {
        for (int i = 0; i < n_tasks; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_tasks) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace cliffcut
