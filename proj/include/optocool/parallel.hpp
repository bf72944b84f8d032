#pragma once

#include <cstddef>
#include <functional>

namespace optocool {

enum class Execution { serial, parallel };

int max_threads();
void set_num_threads(int n);

// Runs body(i) for i in [0, count). With Execution::parallel and OpenMP
// enabled the iterations are distributed over threads; callers write results
// into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  Execution exec = Execution::parallel);

}  // namespace optocool
