#pragma once

#include <cstddef>
#include <functional>

namespace trainclean {

/// Process-wide worker budget used by parallel_for. Results never depend on it.
void set_worker_count(int workers);
int worker_count();

/// Runs body(i) for i in [0, n). Exceptions are rethrown (lowest index first).
/// Nested calls from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace trainclean
