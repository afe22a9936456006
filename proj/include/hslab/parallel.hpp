#pragma once

#include <cstddef>
#include <exception>

#include <omp.h>

namespace hslab {

// Runs body(i) for i in [0, n) across OpenMP threads. Results must be written
// to per-index slots so that assembly order does not depend on scheduling.
// If bodies throw, the exception from the lowest index is rethrown.
template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body, bool parallel = true) {
  std::exception_ptr first;
  std::ptrdiff_t first_idx = n;
#pragma omp parallel for schedule(dynamic) if (parallel && n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(hslab_parallel_for_error)
      {
        if (i < first_idx) {
          first_idx = i;
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace hslab
