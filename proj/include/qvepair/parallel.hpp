#ifndef QVEPAIR_PARALLEL_HPP
#define QVEPAIR_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qvepair {

/// 0 means: QVE_THREADS from the environment, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// captured per index and never cross threads; the returned vector holds one
/// slot per index (null when body(i) succeeded). Indices are claimed in
/// increasing order, so results written to slot i are independent of scheduling.
template <typename Body>
std::vector<std::exception_ptr> parallel_for(std::size_t n, unsigned threads, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned width = static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), n));
    if (width <= 1) {
        worker();
        return errors;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(width - 1);
        for (unsigned w = 1; w < width; ++w) pool.emplace_back(worker);
        worker();
    }
    return errors;
}

}  // namespace qvepair

#endif  // QVEPAIR_PARALLEL_HPP
