#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qvae {

/// Runs body(begin, end) over disjoint chunks of [0, count), possibly on several
/// threads. Chunk boundaries depend only on `count`, never on the thread count,
/// and each output element must be written by exactly one chunk, so results are
/// bit-identical for any worker count.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (count == 0) return;
    if (threads <= 1 || count < 1024) {
        body(std::size_t(0), count);
        return;
    }
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (count + kChunk - 1) / kChunk;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::size_t begin = c * kChunk;
            const std::size_t end = std::min(begin + kChunk, count);
            body(begin, end);
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = std::min<std::size_t>(threads, n_chunks);
    pool.reserve(spawn);
    for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace qvae
