#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace lcgeom {

/// Pairwise tree summation with a fixed split, independent of chunking or
/// thread count. All quadrature reductions go through this so that reports
/// are bit-reproducible.
inline double pairwise_sum(std::span<const double> xs) {
    const size_t n = xs.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Evaluates fn(i) for i in [0, n) with `jobs` threads, each result written
/// to its own slot; the caller reduces the slots deterministically.
inline void parallel_fill(std::vector<double>& out, size_t n,
                          const std::function<double(size_t)>& fn, int jobs) {
    out.resize(n);
    if (jobs <= 1 || n < 256) {
        for (size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (n + size_t(jobs) - 1) / size_t(jobs);
    for (int t = 0; t < jobs; ++t) {
        const size_t lo = size_t(t) * chunk;
        const size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (size_t i = lo; i < hi; ++i) out[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace lcgeom
