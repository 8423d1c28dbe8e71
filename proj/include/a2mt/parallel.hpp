#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace a2mt {

/// Runs f(0), ..., f(count - 1) on up to `jobs` threads. Each index is run
/// exactly once; the first exception is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& f) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

/// Splits `total` items into `chunks` nearly equal consecutive parts.
inline std::size_t chunk_size(std::size_t total, std::size_t chunks, std::size_t c) {
    return total / chunks + (c < total % chunks ? 1 : 0);
}

}  // namespace a2mt
