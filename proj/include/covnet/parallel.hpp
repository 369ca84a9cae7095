#pragma once

#include <exception>
#include <vector>

namespace covnet {

/// Runs fn(i) for i in [0, count) on the OpenMP team. Exceptions are captured
/// per iteration and the first one (by index) is rethrown after the loop.
template <typename Fn>
void parallel_for(long count, Fn&& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count > 0 ? count : 0));
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace covnet
