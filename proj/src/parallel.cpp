#include "epadm/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace epadm {

std::size_t worker_count() {
    static const std::size_t cached = [] {
        const char* env = std::getenv("EPADM_THREADS");
        if (env == nullptr) return std::size_t{1};
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) return std::size_t{1};
        const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
        return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
    }();
    return cached;
}

void parallel_for_ranges(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2048) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace epadm
