#ifndef RABIPISTON_PARALLEL_HPP
#define RABIPISTON_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rabipiston {

inline unsigned effective_jobs(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs body(i) for i in [0, count) on `jobs` worker threads. Each index owns
/// its output slot, so results are independent of scheduling. If bodies throw,
/// the exception from the smallest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& body) {
    jobs = effective_jobs(jobs);
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = static_cast<std::size_t>(-1);
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = jobs < count ? jobs : static_cast<unsigned>(count);
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace rabipiston

#endif
