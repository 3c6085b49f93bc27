#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace tristab {

/// max over i in [0, count) of fn(i), fanned out over `workers` threads.
/// Each index is evaluated exactly once and max is order-independent, so the
/// result does not depend on the worker count. Empty range yields `empty`.
template <typename Fn>
double parallel_max(std::size_t count, unsigned workers, Fn&& fn,
                    double empty = -std::numeric_limits<double>::infinity())
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        double best = empty;
        for (std::size_t i = 0; i < count; ++i)
            best = std::max(best, fn(i));
        return best;
    }
    std::vector<double> partial(workers, empty);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers)
                    partial[w] = std::max(partial[w], fn(i));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return *std::max_element(partial.begin(), partial.end());
}

} // namespace tristab
