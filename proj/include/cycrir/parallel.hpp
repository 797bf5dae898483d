#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cycrir {

/// Default worker count: CYCRIR_PARALLELISM if set, else hardware threads.
inline int default_parallelism() {
    if (const char* env = std::getenv("CYCRIR_PARALLELISM")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs f(i) for i in [0, count) on up to `degree` threads. Work items must
/// be independent; callers own deterministic reduction of the results. The
/// first exception thrown by any item is rethrown after all threads join.
template <class F>
void parallel_for(int count, int degree, F&& f) {
    if (count <= 0) return;
    if (degree <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    const int workers = std::min(degree, count);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cycrir
