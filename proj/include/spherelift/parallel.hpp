#ifndef SPHERELIFT_PARALLEL_HPP
#define SPHERELIFT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace spherelift {

// Worker cap: SPHERELIFT_THREADS when set (values < 1 mean 1), otherwise
// hardware concurrency. Read once.
int max_threads();

// Run fn(i) for i in [0, count) across up to max_threads() workers. Results
// must be written to per-index slots so scheduling cannot reorder anything
// observable. Exceptions from workers are rethrown on the calling thread.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace spherelift

#endif
