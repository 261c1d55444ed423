#include "psdsparse/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace psdsparse {

int thread_count() {
  const char* env = std::getenv("PSDSPARSE_THREADS");
  if (env != nullptr && *env != '\0') {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

}  // namespace psdsparse
