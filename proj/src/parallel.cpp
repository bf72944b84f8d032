#include "optocool/parallel.hpp"

#include <exception>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace optocool {

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  Execution exec) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#if defined(_OPENMP)
  // Exceptions may not cross the parallel region; keep the lowest-index one.
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace optocool
