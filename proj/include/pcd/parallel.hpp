#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pcd {

// Persistent worker pool.  parallel_for splits [0, n) into one contiguous
// slice per worker; the calling thread takes slice 0.  Results must not
// depend on which thread runs which slice: callers only use it for
// independent per-index writes, or for per-chunk partials that are combined
// sequentially afterwards (see deterministic_sum).
class ThreadPool {
 public:
  explicit ThreadPool(int workers) : workers_(workers < 1 ? 1 : workers) {
    for (int id = 1; id < workers_; ++id) {
      threads_.emplace_back([this, id] { worker_loop(id); });
    }
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lk(m_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  int workers() const { return workers_; }

  void parallel_for(std::int64_t n,
                    const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (n <= 0) return;
    if (workers_ == 1) {
      body(0, n);
      return;
    }
    {
      std::lock_guard<std::mutex> lk(m_);
      body_ = &body;
      n_ = n;
      pending_ = workers_ - 1;
      ++generation_;
    }
    wake_.notify_all();
    run_slice(0);
    std::unique_lock<std::mutex> lk(m_);
    done_.wait(lk, [this] { return pending_ == 0; });
    body_ = nullptr;
    if (error_) {
      auto e = error_;
      error_ = nullptr;
      std::rethrow_exception(e);
    }
  }

 private:
  void run_slice(int id) {
    const std::int64_t begin = n_ * id / workers_;
    const std::int64_t end = n_ * (id + 1) / workers_;
    if (begin < end) {
      try {
        (*body_)(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m_);
        if (!error_) error_ = std::current_exception();
      }
    }
  }

  void worker_loop(int id) {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(m_);
        wake_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      run_slice(id);
      {
        std::lock_guard<std::mutex> lk(m_);
        if (--pending_ == 0) done_.notify_one();
      }
    }
  }

  int workers_;
  std::vector<std::thread> threads_;
  std::mutex m_;
  std::condition_variable wake_, done_;
  const std::function<void(std::int64_t, std::int64_t)>* body_ = nullptr;
  std::int64_t n_ = 0;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

// Chunk size for reproducible reductions.  Fixed (not derived from the
// worker count) so that sums come out bitwise identical no matter how many
// threads run.
inline constexpr std::int64_t kSumChunk = 1024;

// Sum of chunk_sum(begin, end) over [0, n) in fixed chunks of kSumChunk.
// Chunks may be evaluated concurrently; partials are combined in chunk
// order on the calling thread.
double deterministic_sum(std::int64_t n,
                         const std::function<double(std::int64_t, std::int64_t)>& chunk_sum,
                         ThreadPool* pool = nullptr);

}  // namespace pcd
