// SPDX-License-Identifier: Apache-2.0

#include "wharray/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wharray
{

namespace
{
std::atomic<int> g_threads{0};
}

void set_num_threads(int n)
{
  g_threads = std::max(0, n);
}

int num_threads()
{
  int n = g_threads.load();
  if (n <= 0)
    n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t)> &body)
{
  const std::ptrdiff_t count = end - begin;
  if (count <= 0)
    return;
  const int nt = static_cast<int>(std::min<std::ptrdiff_t>(num_threads(), count));
  if (nt <= 1)
  {
    for (std::ptrdiff_t i = begin; i < end; ++i)
      body(i);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::ptrdiff_t chunk = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t)
  {
    const std::ptrdiff_t lo = begin + t * chunk;
    const std::ptrdiff_t hi = std::min(end, lo + chunk);
    if (lo >= hi)
      break;
    pool.emplace_back([&, lo, hi] {
      try
      {
        for (std::ptrdiff_t i = lo; i < hi; ++i)
          body(i);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    });
  }
  for (auto &th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace wharray
