// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_PARALLEL_HPP
#define WHARRAY_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wharray
{

// Worker count used by all internal loops. 0 means hardware concurrency.
void set_num_threads(int n);
int num_threads();

// Runs body(i) for i in [begin, end) over contiguous chunks. Each index must write only
// its own outputs, which keeps results independent of the thread count.
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t)> &body);

} // namespace wharray

#endif
