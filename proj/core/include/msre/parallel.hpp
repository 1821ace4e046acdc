#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace msre {

/// Hardware concurrency, at least 1.
inline unsigned default_threads() noexcept
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Run f(i) for i in [0, count) on up to `threads` workers (0: default).
 * Indices are handed out dynamically; f must only write to slots owned by
 * its index. After all workers stop, the exception of the lowest failing
 * index is rethrown.
 */
template<class F>
void parallel_for(std::size_t count, unsigned threads, F&& f)
{
    if (threads == 0)
        threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::size_t error_index = count;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                f(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (i < error_index)
                {
                    error = std::current_exception();
                    error_index = i;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace msre
