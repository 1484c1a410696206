// parallel.hpp
//
// Minimal OpenMP dispatch used by sweeps, batch solves and quadrature
// sampling. Every kernel has a serial path that produces bit-identical
// results; tests compare the two.
#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace tfstar {

enum class Exec { Serial, Parallel };

/// Sets the OpenMP thread count (ignored when n < 1).
void set_worker_count(int n);
int worker_count();

/// Calls f(i) for i in [0, n). In parallel mode iterations are spread over
/// OpenMP threads with dynamic scheduling. If any call throws, the
/// exception from the lowest index is rethrown after all work finishes.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
    if (exec == Exec::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace tfstar
