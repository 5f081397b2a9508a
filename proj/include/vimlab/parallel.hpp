#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace vimlab {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs produce(i) for i in [0, n) on `workers` threads and feeds the results
/// to consume(i, result) strictly in index order on the calling thread.
/// Output is therefore independent of the worker count; only wall-clock
/// changes. A bounded reorder buffer keeps memory in check.
template <class T, class Produce, class Consume>
void parallel_ordered(std::size_t n, int workers, Produce&& produce,
                      Consume&& consume) {
  workers = resolve_workers(workers);
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) consume(i, produce(i));
    return;
  }

  std::mutex mu;
  std::condition_variable cv;
  std::map<std::size_t, T> ready;
  std::size_t next_to_claim = 0;
  std::size_t next_to_consume = 0;
  std::exception_ptr error;
  const std::size_t max_pending = static_cast<std::size_t>(workers) * 2 + 1;

  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] {
          return error || next_to_claim >= n ||
                 ready.size() < max_pending;
        });
        if (error || next_to_claim >= n) return;
        i = next_to_claim++;
      }
      try {
        T value = produce(i);
        std::unique_lock lk(mu);
        ready.emplace(i, std::move(value));
        cv.notify_all();
      } catch (...) {
        std::unique_lock lk(mu);
        if (!error) error = std::current_exception();
        cv.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);

  {
    std::unique_lock lk(mu);
    while (next_to_consume < n) {
      cv.wait(lk, [&] {
        return error || ready.count(next_to_consume) > 0;
      });
      if (error) break;
      auto node = ready.extract(next_to_consume);
      lk.unlock();
      consume(next_to_consume, std::move(node.mapped()));
      ++next_to_consume;
      lk.lock();
      cv.notify_all();
    }
  }

  cv.notify_all();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vimlab
