#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace htensor {

/// Worker cap for parallel restarts: HTENSOR_THREADS when set (clamped to
/// hardware), otherwise 1.
inline int thread_budget() {
    const char* env = std::getenv("HTENSOR_THREADS");
    if (!env) return 1;
    int requested = std::atoi(env);
    if (requested < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    return std::min(requested, hw > 0 ? static_cast<int>(hw) : requested);
}

/// Run f(i) for i in [0, count). Work items must be independent; results keyed
/// by index stay deterministic under any schedule.
template <typename F>
void parallel_for_index(int count, F&& f) {
    const int workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace htensor
