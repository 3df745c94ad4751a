#include "yinyang/parallel.hpp"

#include <algorithm>
#include <exception>

namespace yy {

namespace {
std::pair<int, int> chunk(int begin, int end, int parts, int id) {
  const long n = end - begin;
  const int lo = begin + static_cast<int>(n * id / parts);
  const int hi = begin + static_cast<int>(n * (id + 1) / parts);
  return {lo, hi};
}
}  // namespace

WorkerPool::WorkerPool(int workers) : workers_(std::max(1, workers)) {
  errors_.resize(workers_);
  for (int id = 1; id < workers_; ++id) threads_.emplace_back([this, id] { worker_main(id); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_start_.notify_all();
  for (auto& t : threads_) t.join();
}

int WorkerPool::hardware_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void WorkerPool::worker_main(int id) {
  long seen = 0;
  for (;;) {
    const std::function<void(int, int)>* job;
    int b, e;
    {
      std::unique_lock lock(mu_);
      cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
      b = begin_;
      e = end_;
    }
    const auto [lo, hi] = chunk(b, e, workers_, id);
    try {
      if (lo < hi) (*job)(lo, hi);
    } catch (...) {
      errors_[id] = std::current_exception();
    }
    {
      std::lock_guard lock(mu_);
      if (--pending_ == 0) cv_done_.notify_one();
    }
  }
}

void WorkerPool::parallel_for(int begin, int end, const std::function<void(int, int)>& body) {
  if (end <= begin) return;
  if (workers_ == 1 || end - begin == 1) {
    body(begin, end);
    return;
  }
  {
    std::lock_guard lock(mu_);
    job_ = &body;
    begin_ = begin;
    end_ = end;
    pending_ = workers_ - 1;
    std::fill(errors_.begin(), errors_.end(), nullptr);
    ++generation_;
  }
  cv_start_.notify_all();
  const auto [lo, hi] = chunk(begin, end, workers_, 0);
  try {
    if (lo < hi) body(lo, hi);
  } catch (...) {
    errors_[0] = std::current_exception();
  }
  {
    std::unique_lock lock(mu_);
    cv_done_.wait(lock, [&] { return pending_ == 0; });
  }
  for (auto& e : errors_)
    if (e) std::rethrow_exception(e);
}

void parallel_for(WorkerPool* pool, int begin, int end, const std::function<void(int, int)>& body) {
  if (pool) {
    pool->parallel_for(begin, end, body);
  } else if (begin < end) {
    body(begin, end);
  }
}

}  // namespace yy
