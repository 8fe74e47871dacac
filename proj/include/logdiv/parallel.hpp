#pragma once

#include <exception>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logdiv {

// Serial path is the reference implementation; the parallel path must be
// byte-identical because every row is a pure function of its index and
// results land in index order (no shared accumulators).
enum class ExecPolicy { serial, parallel };

inline int recommended_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void for_each_index(ExecPolicy policy, int n,
                           const std::function<void(int)>& fn) {
#ifdef _OPENMP
  if (policy == ExecPolicy::parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical
        {
          if (!error) error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)policy;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace logdiv
