#pragma once

#include <cstddef>
#include <functional>

namespace tfres::parallel {

// Number of worker threads inner kernels may use on the calling thread.
// Defaults to the process-wide budget; sweeps narrow it per job.
unsigned thread_budget();
void set_default_thread_budget(unsigned threads);

class ScopedThreadBudget {
public:
    explicit ScopedThreadBudget(unsigned threads);
    ~ScopedThreadBudget();
    ScopedThreadBudget(const ScopedThreadBudget&) = delete;
    ScopedThreadBudget& operator=(const ScopedThreadBudget&) = delete;

private:
    unsigned previous_;
};

// Runs body(chunk) for chunk in [0, chunks) on up to thread_budget() threads.
// Chunks are the unit of determinism: callers merge per-chunk partials in
// chunk order so results do not depend on the thread count.
void for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

// Splits [0, n) into `chunks` contiguous ranges.
struct Range {
    std::size_t begin;
    std::size_t end;
};
Range chunk_range(std::size_t n, std::size_t chunks, std::size_t chunk);

}  // namespace tfres::parallel
