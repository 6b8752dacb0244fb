#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pnpbell {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, n) into contiguous chunks, one worker thread per chunk. The
// callback receives (chunk_index, begin, end); merging per-chunk results by
// chunk_index keeps reductions deterministic regardless of thread timing.
inline void parallel_chunks(uint64_t n, int threads,
                            const std::function<void(int, uint64_t, uint64_t)>& fn) {
    if (threads < 1) threads = 1;
    const int nchunks = static_cast<int>(std::min<uint64_t>(n, static_cast<uint64_t>(threads)));
    if (nchunks <= 1) {
        if (n > 0) fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    const uint64_t step = n / nchunks;
    const uint64_t extra = n % nchunks;
    uint64_t begin = 0;
    for (int c = 0; c < nchunks; ++c) {
        const uint64_t len = step + (static_cast<uint64_t>(c) < extra ? 1 : 0);
        const uint64_t end = begin + len;
        pool.emplace_back(fn, c, begin, end);
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace pnpbell
