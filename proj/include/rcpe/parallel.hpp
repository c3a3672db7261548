#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcpe {

/// Thread budget for OpenMP regions. CPE_THREADS caps it; 0/unset means the
/// OpenMP default. Results never depend on the value -- only wall time does.
inline int max_threads() {
  static const int cached = [] {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("CPE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1 && cap < n) n = cap;
    }
    return n < 1 ? 1 : n;
  }();
  return cached;
}

}  // namespace rcpe
