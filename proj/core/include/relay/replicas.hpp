#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "relay/run_report.hpp"

namespace relay {

/// Runs fn(replica) for replica = 0..count-1 on up to `threads` workers.
/// Results are stored by replica index, so the output does not depend on the
/// thread count or on scheduling.
template <class Fn>
std::vector<RunReport> run_replicas(std::size_t count, unsigned threads, Fn&& fn) {
  std::vector<RunReport> reports(count);
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        reports[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

/// Left fold of merge() in replica order.
inline RunReport merge_all(std::span<const RunReport> reports) {
  if (reports.empty()) return {};
  RunReport out = reports.front();
  out.running_trace.clear();
  for (std::size_t i = 1; i < reports.size(); ++i) out = merge(out, reports[i]);
  return out;
}

}  // namespace relay
