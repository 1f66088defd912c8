#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace seednet {

/// Splits [0, total) into at most `workers` contiguous chunks and runs
/// fn(begin, end) for each, on worker threads when workers > 1. Chunk
/// boundaries depend only on (total, workers), so per-chunk work writing to
/// disjoint output slices gives identical results for any worker count.
inline void parallel_for_chunks(int total, int workers, const std::function<void(int, int)>& fn) {
    if (total <= 0) return;
    if (workers > total) workers = total;
    if (workers <= 1) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int base = total / workers;
    const int extra = total % workers;
    int begin = 0;
    for (int w = 0; w < workers; ++w) {
        const int end = begin + base + (w < extra ? 1 : 0);
        threads.emplace_back([&fn, &first_error, &error_mutex, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace seednet
