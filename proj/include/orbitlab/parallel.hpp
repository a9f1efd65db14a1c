#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace orbitlab {

/// out[i] = fn(i) for i < n, on up to `workers` threads. Results land in index
/// order, so the output does not depend on the worker count. The first
/// exception (lowest index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < n; i += step) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || n < 2) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < w; ++t) pool.emplace_back(run, t, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace orbitlab
