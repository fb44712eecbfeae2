#pragma once

#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <vector>

namespace invbal {

/// Serial is the reference; Parallel must produce identical results.
enum class Execution { Serial, Parallel };

namespace kernels {

/// Calls f(k) for k in [0, n). The parallel version rethrows the exception
/// raised by the lowest failing index so error reporting does not depend on
/// scheduling.
template <class F>
void for_each_index_serial(std::int64_t n, F&& f) {
  for (std::int64_t k = 0; k < n; ++k) f(k);
}

template <class F>
void for_each_index_omp(std::int64_t n, F&& f) {
  std::exception_ptr first;
  std::int64_t first_index = std::numeric_limits<std::int64_t>::max();
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      f(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (k < first_index) {
        first_index = k;
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

template <class F>
void for_each_index(std::int64_t n, Execution ex, F&& f) {
  if (ex == Execution::Parallel) {
    for_each_index_omp(n, f);
  } else {
    for_each_index_serial(n, f);
  }
}

struct ArgMin {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

/// Smallest g(k) over k in [0, n); ties go to the smallest k.
template <class G>
ArgMin grid_argmin_serial(std::int64_t n, G&& g) {
  ArgMin best;
  for (std::int64_t k = 0; k < n; ++k) {
    const double v = g(k);
    if (v < best.value) best = {v, k};
  }
  return best;
}

template <class G>
ArgMin grid_argmin_omp(std::int64_t n, G&& g) {
  ArgMin best;
#pragma omp parallel
  {
    ArgMin local;
#pragma omp for schedule(static) nowait
    for (std::int64_t k = 0; k < n; ++k) {
      const double v = g(k);
      if (v < local.value) local = {v, k};
    }
#pragma omp critical(invbal_grid_argmin)
    {
      if (local.index >= 0 &&
          (local.value < best.value || (local.value == best.value && local.index < best.index))) {
        best = local;
      }
    }
  }
  return best;
}

template <class G>
ArgMin grid_argmin(std::int64_t n, Execution ex, G&& g) {
  return ex == Execution::Parallel ? grid_argmin_omp(n, g) : grid_argmin_serial(n, g);
}

}  // namespace kernels
}  // namespace invbal
