#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cashdiv {

/// Selects the kernel variant. `serial` is the reference path kept for
/// testing; `parallel` must reproduce it bit for bit.
enum class Execution { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace cashdiv
