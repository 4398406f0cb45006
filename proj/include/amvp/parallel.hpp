#pragma once

#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amvp {

/// Execution policy for data-parallel loops. The serial path is the reference
/// implementation; the parallel path must produce identical output because
/// every work unit writes only to its own slot.
enum class Exec {
    serial,
    parallel,
};

/// Runs fn(i) for i in [0, n). Under Exec::parallel the iterations are
/// distributed across OpenMP threads; the first exception thrown by any unit
/// is captured and rethrown after the loop joins.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& fn) {
    if (exec == Exec::parallel) {
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(amvp_for_each_index_error)
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

}  // namespace amvp
