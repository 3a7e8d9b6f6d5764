#include "psbf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace psbf {

int resolve_threads(int requested) {
    int hw = int(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int threads = requested > 0 ? requested : hw;
    if (const char* cap = std::getenv("PSB_FACTOR_THREADS")) {
        int limit = std::atoi(cap);
        if (limit > 0) threads = std::min(threads, limit);
    }
    return std::max(threads, 1);
}

void parallel_for(int threads, std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    threads = int(std::min<std::int64_t>(threads, count));
    if (threads <= 1) {
        for (std::int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const std::int64_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = begin + t * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace psbf
