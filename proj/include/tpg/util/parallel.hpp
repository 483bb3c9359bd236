#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tpg::util {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must write to
/// disjoint outputs; the first exception thrown is rethrown on the caller.
template<class Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if(workers == 1 || n < 2) {
        for(std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    std::mutex               failure_mutex;
    auto                     body = [&] {
        for(std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch(...) {
                std::lock_guard lock(failure_mutex);
                if(!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for(std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(body);
    for(auto &t : pool) t.join();
    if(failure) std::rethrow_exception(failure);
}

} // namespace tpg::util
