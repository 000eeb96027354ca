#pragma once

// Thin helpers for conditional OpenMP use. Every parallel kernel in the
// library has a serial twin selected by ExecMode::serial; the two must
// produce bitwise-identical results.

#include <cstddef>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fcoord {

enum class ExecMode { serial, parallel };

inline int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls body(i) for i in [0, n). Iterations must be independent; each
/// writes only to its own output slot so the gathered result does not depend
/// on scheduling. If iterations throw, the exception of the lowest index is
/// rethrown after the loop.
template <class Body>
void for_each_index(ExecMode mode, std::size_t n, Body&& body) {
  if (mode == ExecMode::parallel && n > 1 && num_threads() > 1) {
#ifdef _OPENMP
    const auto count = static_cast<long long>(n);
    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(fcoord_for_each_index)
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace fcoord
