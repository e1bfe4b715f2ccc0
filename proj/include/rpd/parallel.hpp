#ifndef RPD_PARALLEL_HPP
#define RPD_PARALLEL_HPP

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rpd {

// Runs fn(i) for i in [0, n). Each index must write only its own output
// slot, so the merged result is deterministic regardless of scheduling.
// RPD_THREADS=1 forces serial execution.
inline void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("RPD_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) workers = static_cast<unsigned>(parsed);
    }
    if (workers <= 1 || n < 64) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const int64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const int64_t lo = static_cast<int64_t>(w) * chunk;
        const int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace rpd

#endif // RPD_PARALLEL_HPP
