#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace entrolib {

// Worker count: ENTROLIB_THREADS when set to a positive integer, else the hardware concurrency.
inline std::size_t thread_limit()
{
    if (const char *env = std::getenv("ENTROLIB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs fn(0..count-1). Tasks are claimed in index order; fn must not throw.
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn)
{
    const std::size_t workers = std::min(thread_limit(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(run);
    }
    run();
    for (auto &t : pool) {
        t.join();
    }
}

} // namespace entrolib
