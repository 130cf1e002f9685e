#include "core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tfres::parallel {
namespace {

std::atomic<unsigned> g_default_budget{std::max(1u, std::thread::hardware_concurrency())};
thread_local unsigned t_budget = 0;  // 0: use default

}  // namespace

unsigned thread_budget() {
    return t_budget != 0 ? t_budget : g_default_budget.load();
}

void set_default_thread_budget(unsigned threads) {
    g_default_budget = std::max(1u, threads);
}

ScopedThreadBudget::ScopedThreadBudget(unsigned threads) : previous_(t_budget) {
    t_budget = std::max(1u, threads);
}

ScopedThreadBudget::~ScopedThreadBudget() { t_budget = previous_; }

Range chunk_range(std::size_t n, std::size_t chunks, std::size_t chunk) {
    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;
    const std::size_t begin = chunk * base + std::min(chunk, extra);
    return {begin, begin + base + (chunk < extra ? 1 : 0)};
}

void for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_budget(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        // Nested kernels inside a chunk stay single-threaded.
        ScopedThreadBudget inner(1);
        for (std::size_t c = next++; c < chunks; c = next++) {
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tfres::parallel
