#pragma once
// Deterministic worker pool: fixed block decomposition independent of the
// thread count, exact integer merges, so results never depend on scheduling.

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace mnd5 {

// Runs fn(block_index) for block_index in [0, nblocks).  fn must only touch
// state owned by the calling worker or indexed by block.
template <class Fn>
void run_blocks(std::uint64_t nblocks, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || nblocks <= 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b; (b = next.fetch_add(1)) < nblocks;) fn(b);
    };
    std::vector<std::thread> pool;
    int n = threads;
    if (std::uint64_t(n) > nblocks) n = int(nblocks);
    pool.reserve(size_t(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace mnd5
