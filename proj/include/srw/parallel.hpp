#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace srw {

struct ParallelConfig {
    int workers = 0;               // 0: hardware concurrency
    std::uint64_t chunk_size = 1024;
};

inline int resolve_workers(const ParallelConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Splits [0, n) into fixed-size chunks and evaluates fn(begin, end, chunk)
// on a pool of workers. Results come back indexed by chunk, so folding them
// in index order gives the same answer no matter how many workers ran or how
// the scheduler interleaved them. Exceptions are re-thrown on the caller.
template <typename ChunkResult, typename Fn>
std::vector<ChunkResult> run_chunked(std::uint64_t n, const ParallelConfig& cfg,
                                     Fn&& fn) {
    const std::uint64_t chunk = cfg.chunk_size > 0 ? cfg.chunk_size : 1024;
    const std::uint64_t n_chunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
    std::vector<ChunkResult> results(n_chunks);
    if (n_chunks == 0) return results;

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        try {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks) return;
                const std::uint64_t begin = c * chunk;
                const std::uint64_t end = std::min(n, begin + chunk);
                results[c] = fn(begin, end, c);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n_chunks, std::memory_order_relaxed); // drain remaining work
        }
    };

    const int workers =
        static_cast<int>(std::min<std::uint64_t>(resolve_workers(cfg), n_chunks));
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return results;
}

} // namespace srw
