#ifndef HT_PARALLEL_HPP
#define HT_PARALLEL_HPP

// Sharded execution. The shard layout depends only on the job size, never on
// the worker count, and each shard owns a derived RNG stream, so outputs are
// identical for 1 or N workers.

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ht::parallel {

struct ShardPlan {
    std::size_t count;       // number of shards
    std::size_t base;        // items per shard (first `extra` shards get one more)
    std::size_t extra;

    std::size_t begin(std::size_t s) const { return s * base + std::min(s, extra); }
    std::size_t size(std::size_t s) const { return base + (s < extra ? 1u : 0u); }
};

// Splits `total` items into at least min_shards batches (when total allows),
// capped so shards do not get too small to matter.
inline ShardPlan plan_shards(std::size_t total, std::size_t min_shards = 32,
                             std::size_t max_shards = 512) {
    std::size_t count = total / 4096;
    if (count < min_shards) count = min_shards;
    if (count > max_shards) count = max_shards;
    if (count > total) count = total == 0 ? 1 : total;
    return {count, total / count, total % count};
}

// fn(shard_index) must write only shard-local state (e.g. results[shard_index]).
template <class Fn>
void run_shards(std::size_t n_shards, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n_shards <= 1) {
        for (std::size_t s = 0; s < n_shards; ++s) fn(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t s = next.fetch_add(1);
            if (s >= n_shards || failed.load()) return;
            try {
                fn(s);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    unsigned n = std::min<std::size_t>(workers, n_shards);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

}  // namespace ht::parallel

#endif  // HT_PARALLEL_HPP
