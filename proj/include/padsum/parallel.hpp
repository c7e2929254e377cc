#ifndef PADSUM_PARALLEL_HPP
#define PADSUM_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace padsum {

// Runs fn(i) for i in [0, count) on up to `jobs` threads and returns the
// results in index order, so output is identical for any job count.
template <class R, class Fn>
std::vector<R> parallel_map(int jobs, int count, Fn fn) {
    std::vector<R> out(static_cast<std::size_t>(count));
    if (count == 0) return out;
    if (jobs <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    int nthreads = std::min(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace padsum

#endif
