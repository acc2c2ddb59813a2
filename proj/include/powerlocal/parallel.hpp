#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace powerlocal {

/// out[i] = fn(items[i]). Items are split into `workers` contiguous blocks,
/// one thread each; output order is the input order whatever the worker
/// count. The first exception thrown by any worker is rethrown.
template <class Result, class Item, class Fn>
std::vector<Result> parallel_map(std::span<const Item> items, unsigned workers, Fn&& fn) {
  std::vector<Result> out(items.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t block = (items.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(items.size(), w * block);
    const std::size_t end = std::min(items.size(), begin + block);
    threads.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) out[i] = fn(items[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace powerlocal
