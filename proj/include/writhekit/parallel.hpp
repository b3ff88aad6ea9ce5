#pragma once

// Deterministic tiled reductions over index ranges.
//
// The index range is cut into fixed tiles whose boundaries depend only on the
// range length. Each tile is reduced sequentially into its own slot and the
// slots are combined in tile order, so the result is bit-identical for any
// worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace writhekit {

inline constexpr std::size_t kDefaultTile = 64;

/// 0 means "use hardware concurrency".
inline std::size_t& default_workers() {
    static std::size_t workers = 0;
    return workers;
}

inline std::size_t resolve_workers(std::size_t requested) {
    std::size_t w = requested != 0 ? requested : default_workers();
    if (w == 0) w = std::max<unsigned>(1u, std::thread::hardware_concurrency());
    return w;
}

/// Runs `body(tile_index, begin, end)` over [0, count) in tiles of `tile`.
template <class Body>
void for_each_tile(std::size_t count, std::size_t tile, std::size_t workers, Body&& body) {
    if (count == 0) return;
    const std::size_t tiles = (count + tile - 1) / tile;
    workers = std::min(resolve_workers(workers), tiles);
    auto run = [&](std::size_t t) { body(t, t * tile, std::min(count, (t + 1) * tile)); };
    if (workers <= 1) {
        for (std::size_t t = 0; t < tiles; ++t) run(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < tiles; t = next++) {
                try {
                    run(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Sum of `row(i)` for i in [0, count). `row` must be a pure function of i.
template <class Row>
double tiled_sum(std::size_t count, Row&& row, std::size_t workers = 0, std::size_t tile = kDefaultTile) {
    const std::size_t tiles = (count + tile - 1) / tile;
    std::vector<double> partial(tiles, 0.0);
    for_each_tile(count, tile, workers, [&](std::size_t t, std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += row(i);
        partial[t] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// Minimum of `row(i)` for i in [0, count); `init` when empty.
template <class Row>
double tiled_min(std::size_t count, Row&& row, double init, std::size_t workers = 0,
                 std::size_t tile = kDefaultTile) {
    const std::size_t tiles = (count + tile - 1) / tile;
    std::vector<double> partial(tiles, init);
    for_each_tile(count, tile, workers, [&](std::size_t t, std::size_t b, std::size_t e) {
        double m = init;
        for (std::size_t i = b; i < e; ++i) m = std::min(m, row(i));
        partial[t] = m;
    });
    double best = init;
    for (double p : partial) best = std::min(best, p);
    return best;
}

}  // namespace writhekit
