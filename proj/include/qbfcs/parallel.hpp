#ifndef QBFCS_PARALLEL_HPP
#define QBFCS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qbfcs {

/// Number of worker threads to use: `requested` if positive, otherwise the
/// hardware concurrency (at least 1).
int resolve_worker_count(int requested);

/// Run body(i) for i in [0, count) on `workers` threads. Work items are
/// claimed dynamically, so the execution order is unspecified; bodies must
/// write only to their own index's slot, which keeps results identical
/// across worker counts. Exceptions from bodies are rethrown on the caller.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

} // namespace qbfcs

#endif
