#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace degpar {

/// Splits [0, n) into `threads` contiguous chunks and runs fn(begin, end) on each.
/// Chunk boundaries depend only on (n, threads), so per-chunk partial results
/// combined in chunk order are reproducible.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 4096) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned c = 0; c < threads; ++c) {
        const std::size_t b = c * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
}

}  // namespace degpar
