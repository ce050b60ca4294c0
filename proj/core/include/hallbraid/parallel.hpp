#ifndef HALLBRAID_PARALLEL_HPP
#define HALLBRAID_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hallbraid {

// Worker count: `requested` when positive, else the HALLBRAID_THREADS
// environment variable, else the hardware concurrency.
int configured_thread_count(int requested = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers.  Tasks must
// write only to their own output slots; results are then independent of the
// scheduling and of the worker count.
void parallel_for(size_t count, int threads,
                  const std::function<void(size_t)>& fn);

}  // namespace hallbraid

#endif
