#ifndef PROTO_CURRICULUM_PARALLEL_HPP
#define PROTO_CURRICULUM_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace proto_curriculum {

// Worker count: hardware concurrency, capped by PROTO_CURRICULUM_THREADS.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PROTO_CURRICULUM_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // unparsable cap is ignored
        }
    }
    return n;
}

// Calls fn(begin, end) over contiguous blocks of [0, n). Each index is
// visited exactly once; callers write only to per-index slots so results
// do not depend on the number of workers.
template <class Fn>
void parallel_for_blocks(std::size_t n, Fn&& fn, std::size_t min_block = 4096) {
    const std::size_t workers =
        std::min<std::size_t>(worker_count(), (n + min_block - 1) / std::max<std::size_t>(min_block, 1));
    if (workers <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    const std::size_t block = (n + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(n, begin + block);
            if (begin >= end) break;
            threads.emplace_back([&, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_PARALLEL_HPP
