#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <omp.h>

namespace bfly {

inline int num_workers() { return omp_get_max_threads(); }
inline int worker_id() { return omp_get_thread_num(); }

// Sets the OpenMP worker count for the lifetime of the object. 0 keeps the
// current setting.
class ScopedWorkers {
 public:
  explicit ScopedWorkers(int n) : saved_(omp_get_max_threads()) {
    if (n > 0) omp_set_num_threads(n);
  }
  ~ScopedWorkers() { omp_set_num_threads(saved_); }
  ScopedWorkers(const ScopedWorkers&) = delete;
  ScopedWorkers& operator=(const ScopedWorkers&) = delete;

 private:
  int saved_;
};

template <class T>
inline void atomic_add(T& target, T delta) {
  std::atomic_ref<T>(target).fetch_add(delta, std::memory_order_relaxed);
}

template <class T>
inline void atomic_sub(T& target, T delta) {
  std::atomic_ref<T>(target).fetch_sub(delta, std::memory_order_relaxed);
}

// Exclusive prefix sum; returns the total.
template <class T>
T exclusive_scan_inplace(std::span<T> values) {
  T running{};
  for (auto& v : values) {
    T next = running + v;
    v = running;
    running = next;
  }
  return running;
}

}  // namespace bfly
