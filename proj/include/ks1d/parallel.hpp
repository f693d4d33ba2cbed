#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ks1d {

// Execution policy of the data-parallel kernels. Serial is the reference
// implementation; Parallel runs the same per-item work under OpenMP. Every
// work item evaluates in a fixed floating-point order, so the two policies
// produce bit-identical results.
enum class Exec { Serial, Parallel };

template <class F>
void parallel_for(std::ptrdiff_t count, Exec exec, F&& body) {
#ifdef _OPENMP
    // Tiny loops are not worth a fork.
    if (exec == Exec::Parallel && count >= 3) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ks1d
