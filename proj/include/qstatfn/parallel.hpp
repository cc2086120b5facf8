#pragma once

#include <cstddef>
#include <functional>

namespace qstatfn {

// Thread cap from QSTATFN_THREADS (0 or unset = hardware auto).
unsigned thread_cap();

// Index-chunked parallel map over [0, count); results land at fixed indices,
// so output is independent of the thread count. Runs inline for small counts
// or a cap of one.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace qstatfn
