#ifndef TORICNET_PARALLEL_HPP
#define TORICNET_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace toricnet {

// Runs fn(0..count-1) on up to `jobs` threads. Results must be written to
// per-index slots by the caller, so the merge order is deterministic.
// The first exception thrown by any worker is rethrown.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(jobs, count);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace toricnet

#endif
