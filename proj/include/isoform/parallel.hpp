#ifndef ISOFORM_PARALLEL_HPP_
#define ISOFORM_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace isoform {

// Effective worker count: min(hardware, SEMIGROUP_ISOFORM_THREADS if set,
// explicit cap if set). Always >= 1.
int thread_cap();

void set_thread_cap(int cap);

// Runs fn(i) for i in [0, n). Work is chunked over threads; each index owns
// its output slot, so results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace isoform

#endif  // ISOFORM_PARALLEL_HPP_
