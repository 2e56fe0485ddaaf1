#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tiltquad {

/// Worker count for sweeps: TILTQUAD_THREADS when set to a positive
/// integer, otherwise the hardware concurrency.
inline unsigned sweep_threads() {
    if (const char* env = std::getenv("TILTQUAD_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) {
                return static_cast<unsigned>(n);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on up to sweep_threads() workers. Results are
/// stored by index, so the output order never depends on scheduling.
/// fn must not throw; callers record per-item failures in the result.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<Result> out(n);
    const std::size_t workers = std::min<std::size_t>(sweep_threads(), n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = fn(k);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    out[k] = fn(k);
                }
            });
        }
    }
    return out;
}

}  // namespace tiltquad
