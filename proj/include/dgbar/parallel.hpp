#ifndef DGBAR_PARALLEL_HPP
#define DGBAR_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace dgbar {

// Runs fn(i) for i in [0, n) on up to `jobs` workers. Work items must be
// independent; callers own any output slots. jobs <= 1 runs inline, and
// results must not depend on scheduling (outputs are indexed, never appended).
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0)
        return;
    if (jobs <= 1 || n == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const int workers = std::min(jobs, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace dgbar

#endif
