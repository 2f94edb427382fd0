#include "wwrcva/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wwrcva {

void run_parallel(long m, unsigned threads, const std::function<void(long)>& work) {
    if (m <= 0) return;
    if (threads <= 1 || m == 1) {
        for (long i = 0; i < m; ++i) work(i);
        return;
    }
    constexpr long chunk = 64;
    std::atomic<long> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto body = [&]() {
        for (;;) {
            long lo = next.fetch_add(chunk, std::memory_order_relaxed);
            if (lo >= m) return;
            long hi = lo + chunk < m ? lo + chunk : m;
            try {
                for (long i = lo; i < hi; ++i) work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wwrcva
