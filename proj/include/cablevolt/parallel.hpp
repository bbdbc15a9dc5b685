#pragma once

// Index-parallel map used by every sweep kernel. The serial path is the
// reference implementation; both paths write results by index, so the output
// is identical and independent of thread scheduling.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace cablevolt {

enum class Execution { Serial, Parallel };

template <class F>
auto parallel_map(std::size_t n, Execution exec, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(n);
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = f(i);
        }
        return out;
    }

    // Exceptions cannot leave an OpenMP region; keep the one with the lowest index.
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = f(k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace cablevolt
