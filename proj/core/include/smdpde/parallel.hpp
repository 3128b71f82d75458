#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace smdpde {

/// Worker count used when a caller passes 0: the OpenMP default, which is
/// the available hardware parallelism unless OMP_NUM_THREADS says otherwise.
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Each index is an independent task. If any task throws, the exception of
/// the lowest failing index is rethrown after all tasks finish, so error
/// reporting does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const int workers = threads > 0 ? threads : default_thread_count();
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace smdpde
