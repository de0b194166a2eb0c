#ifndef GAM_SRC_PARALLEL_HPP
#define GAM_SRC_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace gam::detail {

// Static contiguous partition of [0, n) over `workers` threads. Callers
// write results into per-index slots and reduce them in index order, which
// keeps every result independent of the worker count.
template <typename F>
void parallel_for(long long n, int workers, F&& body) {
    workers = static_cast<int>(std::clamp<long long>(workers, 1, std::max<long long>(n, 1)));
    if (workers == 1) {
        body(0LL, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const long long lo = n * w / workers, hi = n * (w + 1) / workers;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

} // namespace gam::detail

#endif
