#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace hopnet {

/// Replica loops run either on the calling thread or on an OpenMP team.
/// Results are written per index, so both give identical output.
enum class Execution { serial, parallel };

/// Thread count for parallel loops: HOPNET_THREADS if set, else the OpenMP
/// default.
int thread_count();

/// Calls f(i) for i in [0, n). The first exception by index is rethrown.
template <class F>
void for_each_index(std::size_t n, Execution ex, F&& f) {
    if (ex == Execution::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long long i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hopnet
