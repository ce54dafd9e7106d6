#include "scb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scb {

int default_thread_count() {
    if (const char* env = std::getenv("SCB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t begin, std::int64_t end, const std::function<void(std::int64_t)>& fn,
                  int threads) {
    if (end <= begin) return;
    std::int64_t count = end - begin;
    int workers = threads > 0 ? threads : default_thread_count();
    workers = static_cast<int>(std::min<std::int64_t>(workers, count));
    if (workers <= 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    std::atomic<bool> failed{false};
    auto run_block = [&](int w) {
        std::int64_t chunk = (count + workers - 1) / workers;
        std::int64_t lo = begin + w * chunk;
        std::int64_t hi = std::min(end, lo + chunk);
        try {
            for (std::int64_t i = lo; i < hi && !failed.load(std::memory_order_relaxed); ++i) fn(i);
        } catch (...) {
            failed.store(true);
            std::lock_guard<std::mutex> g(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run_block, w);
    run_block(0);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace scb
