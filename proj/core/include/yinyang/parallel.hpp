#pragma once
/// Minimal persistent worker pool. parallel_for splits [begin,end) into
/// static contiguous chunks, one per worker; the calling thread takes the
/// first chunk. Work assignment does not depend on timing, so results of
/// line-independent kernels are identical for every worker count.

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace yy {

class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int size() const { return workers_; }
  /// body(lo, hi) is called on disjoint ranges covering [begin, end).
  void parallel_for(int begin, int end, const std::function<void(int, int)>& body);

  static int hardware_workers();

 private:
  void worker_main(int id);

  int workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_start_, cv_done_;
  const std::function<void(int, int)>* job_ = nullptr;
  int begin_ = 0, end_ = 0;
  long generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
  std::vector<std::exception_ptr> errors_;
};

/// Runs body over [begin,end) on the pool, or inline when pool is null.
void parallel_for(WorkerPool* pool, int begin, int end, const std::function<void(int, int)>& body);

}  // namespace yy
