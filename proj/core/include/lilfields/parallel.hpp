#pragma once

#include <cstdint>
#include <functional>

namespace lilfields {

/// Worker pool handed down from the orchestrator; modules never spawn
/// threads on their own. for_each_index partitions [0,n) into contiguous
/// chunks, one per worker. Callers write results into index-addressed slots
/// and reduce serially afterwards, so outputs do not depend on the thread
/// count or schedule.
class ParallelContext {
 public:
  /// Serial context (single thread).
  ParallelContext() : threads_(1) {}
  explicit ParallelContext(int threads);

  static int hardware_threads();

  int threads() const { return threads_; }

  void for_each_index(std::int64_t n, const std::function<void(std::int64_t)>& fn) const;

 private:
  int threads_;
};

}  // namespace lilfields
