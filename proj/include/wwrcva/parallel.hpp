#pragma once

#include <functional>

namespace wwrcva {

// Runs work(i) for i in [0, m) across the given number of threads. Work items
// must be independent and write only to their own output slots; the dynamic
// chunk assignment is then invisible in the results, which keeps outputs
// identical for any thread count. Exceptions are rethrown on the caller.
void run_parallel(long m, unsigned threads, const std::function<void(long)>& work);

}  // namespace wwrcva
