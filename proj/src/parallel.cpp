#include "svedefog/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace svedefog {

int thread_count() {
    static const int cached = [] {
        int n = 0;
        if (const char* env = std::getenv("SVE_DEFOG_THREADS")) {
            n = std::atoi(env);
            if (n < 0) n = 0;
        }
        if (n == 0) {
            n = static_cast<int>(std::thread::hardware_concurrency());
            if (n <= 0) n = 1;
        }
        return n;
    }();
    return cached;
}

void parallel_rows(int rows, const std::function<void(int, int)>& fn) {
    const int threads = std::min(thread_count(), std::max(rows, 1));
    if (threads <= 1 || rows < 64) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(rows, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace svedefog
