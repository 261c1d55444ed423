#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace psdsparse {

// Number of OpenMP threads the library kernels use. Reads PSDSPARSE_THREADS
// on every call; unset, empty or 0 means the OpenMP default.
int thread_count();

// out[i] = f(i) for i in [0, n), statically split across thread_count()
// threads. If any call throws, the exception from the lowest index is
// rethrown after the loop.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  std::exception_ptr failure;
  std::ptrdiff_t failed_at = count;
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(psdsparse_parallel_map)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace psdsparse
