#pragma once

// Small shared utilities: deterministic summation, grid construction,
// simple thread-pool-free parallel loops, and numeric formatting.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "padkit/errors.hpp"

namespace padkit {

/// Uniform grid with exact endpoints: v[0] == lo and v[n-1] == hi bitwise.
/// (Downstream periodicity checks rely on endpoint exactness.)
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> v(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
    v[n - 1] = hi;
    return v;
}

/// Pairwise (cascade) summation. Deterministic for a fixed input ordering and
/// considerably more accurate than naive accumulation for long sums.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = xs[0];
        for (std::size_t i = 1; i < n; ++i) acc += xs[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(std::span<const T>(xs));
}

/// Runs fn(i) for i in [0, n) on up to `threads` std::threads, splitting the
/// index range into contiguous chunks. The caller must make fn(i) write only
/// to slot i of pre-allocated storage; results are then independent of the
/// scheduling and bit-reproducible at any thread count. The first exception
/// thrown by any worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    if (threads == 0) threads = 1;
    const unsigned nw = static_cast<unsigned>(
        std::min<std::size_t>(threads, n));
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (unsigned w = 0; w < nw; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace detail {
inline std::atomic<unsigned>& thread_limit_storage() {
    static std::atomic<unsigned> limit{0}; // 0 = automatic (hardware concurrency)
    return limit;
}
} // namespace detail

/// Cap the number of worker threads used by the parallel stages (0 restores
/// the automatic hardware default). Results are bit-identical at any setting;
/// this only trades wall time.
inline void set_thread_limit(unsigned n) { detail::thread_limit_storage().store(n); }

/// Current worker-thread budget: the configured cap, or the hardware
/// concurrency (at least 1) when no cap is set.
inline unsigned thread_limit() {
    const unsigned n = detail::thread_limit_storage().load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Shortest round-trip decimal representation ("%.17g") for CSV output.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Mirror-symmetric polar grid on [0, pi]: theta[n-1-i] == pi - theta[i]
/// holds bitwise, so reflection-based asymmetries need no interpolation.
inline std::vector<double> mirror_theta_grid(std::size_t n) {
    if (n < 2) throw ArgumentError("theta grid needs at least 2 nodes");
    std::vector<double> theta = linspace(0.0, std::numbers::pi, n);
    if (n % 2 == 1) theta[n / 2] = 0.5 * std::numbers::pi;
    // Derive the lower half from the upper half. For x in [pi/2, pi] the
    // subtraction pi - x is exact (Sterbenz), so theta[n-1-i] == pi - theta[i]
    // holds bitwise in BOTH directions of every mirror pair.
    for (std::size_t i = 0; i < n / 2; ++i)
        theta[i] = std::numbers::pi - theta[n - 1 - i];
    return theta;
}

} // namespace padkit
