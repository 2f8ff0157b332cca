#pragma once

#include <algorithm>
#include <atomic>
#include <vector>

#include "bfly/bucketing.hpp"
#include "bfly/parallel.hpp"
#include "bfly/peeling.hpp"

namespace bfly::detail {

enum : std::uint8_t { kActive = 0, kPeeling = 1, kPeeled = 2 };

// Per-round scratch shared by all peeling variants: status per element and a
// delta table with a touched list.
class PeelState {
 public:
  explicit PeelState(std::size_t n)
      : status(n, kActive), delta_(n, 0), touched_(static_cast<std::size_t>(num_workers())) {}

  std::vector<std::uint8_t> status;

  // Thread-safe.
  void subtract(std::size_t x, Count amount) {
    if (amount == 0) return;
    if (std::atomic_ref<Count>(delta_[x]).fetch_add(amount, std::memory_order_relaxed) == 0) {
      touched_[static_cast<std::size_t>(worker_id())].push_back(x);
    }
  }

  // Touched elements in ascending order with their deltas; resets the table.
  template <class F>
  void drain(F&& f) {
    std::vector<std::size_t> all;
    for (auto& t : touched_) {
      all.insert(all.end(), t.begin(), t.end());
      t.clear();
    }
    std::sort(all.begin(), all.end());
    for (std::size_t x : all) {
      f(x, delta_[x]);
      delta_[x] = 0;
    }
  }

 private:
  std::vector<Count> delta_;
  std::vector<std::vector<std::size_t>> touched_;
};

// Generic round loop. round(A, state) must call state.subtract for every
// butterfly removed from an active element by peeling A; elements of A are
// marked kPeeling during the call and kPeeled afterwards.
template <class Round>
Decomposition run_peeling(std::vector<Count> counts, BucketBackend backend, Round&& round) {
  Decomposition out;
  const std::size_t n = counts.size();
  out.number.assign(n, 0);
  for (Count c : counts) out.max_b = std::max(out.max_b, c);
  BucketQueue q(counts, backend);
  PeelState state(n);
  std::vector<UpdateTriple> triples;
  while (auto bucket = q.pop_min()) {
    const Count k = bucket->key;
    ++out.rounds;
    out.round_keys.push_back(k);
    for (ElementId e : bucket->members) {
      out.number[e] = k;
      state.status[e] = kPeeling;
    }
    round(bucket->members, state);
    triples.clear();
    state.drain([&](std::size_t x, Count d) {
      const Count cur = counts[x];
      const Count next = std::max(k, cur > d ? cur - d : 0);
      if (next != cur) {
        triples.push_back({cur, x, next});
        counts[x] = next;
      }
    });
    q.update(triples);
    for (ElementId e : bucket->members) state.status[e] = kPeeled;
  }
  return out;
}

}  // namespace bfly::detail
