#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hsd {

// Parallel kernels honour this; the serial reference path (used by the tests
// and the benchmark baseline) ignores it and always runs single-threaded.
inline int& thread_count() {
    static int n = 0; // 0 = OpenMP default
    return n;
}

inline void set_threads(int n) {
    thread_count() = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

inline int effective_threads() {
#ifdef _OPENMP
    return thread_count() > 0 ? thread_count() : omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace hsd
