#include "daseg/parallel.h"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <vector>

namespace daseg {

int MaxThreads() {
  if (const char* env = std::getenv("DASEG_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

void ParallelFor(int n, const std::function<void(int)>& body,
                 Execution execution) {
  if (execution == Execution::kSerial || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  // Exceptions may not cross the parallel region; the lowest failing
  // iteration's exception is rethrown, matching the serial path.
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(MaxThreads())
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace daseg
