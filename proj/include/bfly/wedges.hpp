#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "bfly/aggregation.hpp"
#include "bfly/parallel.hpp"
#include "bfly/ranking.hpp"

namespace bfly {

// A retrieved wedge in rank ids. e1 is the lowest-ranked vertex of the three;
// slot_e1 and slot_e2 are RankedGraph slots whose edges are (e1, c) and
// (e2, c) respectively.
struct WedgeRef {
  VertexId e1 = 0;
  VertexId e2 = 0;
  VertexId c = 0;
  std::size_t slot_e1 = 0;
  std::size_t slot_e2 = 0;
};

// Number of wedges anchored at x. Without the cache optimization the anchor
// is the low endpoint e1; with it the anchor is the high endpoint e2.
Count anchor_wedge_count(const RankedGraph& rg, VertexId x, bool cache_opt);
std::vector<Count> anchor_wedge_counts(const RankedGraph& rg, bool cache_opt);

// Calls f(other_endpoint, wedge) for every wedge anchored at x.
template <class F>
void for_each_anchored_wedge(const RankedGraph& rg, VertexId x, bool cache_opt, F&& f) {
  if (!cache_opt) {
    const std::size_t base = rg.slot_begin(x);
    for (std::size_t i = 0; i < rg.self_degree(x); ++i) {
      const std::size_t s = base + i;
      const VertexId y = rg.slot_target(s);
      const std::size_t ybase = rg.slot_begin(y);
      for (std::size_t j = 0; j < rg.cut_degree(s); ++j) {
        const std::size_t t = ybase + j;
        const VertexId x2 = rg.slot_target(t);
        f(x2, WedgeRef{x, x2, y, s, t});
      }
    }
    return;
  }
  const std::size_t base = rg.slot_begin(x);
  for (std::size_t i = 0; i < rg.degree(x); ++i) {
    const std::size_t s = base + i;
    const VertexId y = rg.slot_target(s);
    const VertexId bound = std::min(x, y);
    if (bound == 0) continue;
    auto ny = rg.neighbors(y);
    const std::size_t from = count_prefix_greater(ny, bound - 1);
    const std::size_t ybase = rg.slot_begin(y);
    for (std::size_t j = from; j < ny.size(); ++j) {
      f(ny[j], WedgeRef{ny[j], x, y, ybase + j, s});
    }
  }
}

// Every wedge satisfying the retrieval condition, exactly once, in parallel.
// visit must be safe for concurrent calls.
template <class Visit>
void get_wedges(const RankedGraph& rg, Visit&& visit) {
  const VertexId n = rg.num_vertices();
#pragma omp parallel for schedule(dynamic, 64)
  for (VertexId x = 0; x < n; ++x) {
    for_each_anchored_wedge(rg, x, false, [&](VertexId, const WedgeRef& w) { visit(w); });
  }
}

// Same wedge multiset as get_wedges, iterated from the higher endpoint.
template <class Visit>
void get_wedges_cacheopt(const RankedGraph& rg, Visit&& visit) {
  const VertexId n = rg.num_vertices();
#pragma omp parallel for schedule(dynamic, 64)
  for (VertexId x = 0; x < n; ++x) {
    for_each_anchored_wedge(rg, x, true, [&](VertexId, const WedgeRef& w) { visit(w); });
  }
}

// Endpoint pair -> number of wedges. Keys are e1 * n + e2 with e1 < e2 in
// rank; entries are sorted by key.
struct WedgeCountTable {
  VertexId n = 0;
  std::vector<KeyCount> entries;

  static std::uint64_t key(VertexId n, VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return std::uint64_t{a} * n + b;
  }
  Count lookup(VertexId a, VertexId b) const;
  Count total_wedges() const;
  bool operator==(const WedgeCountTable&) const = default;
};

// Anchor-index ranges [first, last).
using AnchorRange = std::pair<std::size_t, std::size_t>;

// Batches for the batching backends. Simple: fixed batch_vertices anchors.
// Wedge-aware: greedy by prefix, each batch holding at most
// max_wedges_in_flight wedges. Throws ConfigError when a single anchor
// exceeds the wedge-aware budget.
std::vector<AnchorRange> batch_plan(std::span<const Count> wedges_per_anchor,
                                    const AggregationConfig& cfg);
std::vector<AnchorRange> batch_plan(const RankedGraph& rg, const AggregationConfig& cfg,
                                    bool cache_opt = false);

// Chunks for sort/hash/hist: greedy by prefix under the budget. An anchor over
// the budget forms a chunk of its own and is split internally.
std::vector<AnchorRange> chunk_plan(std::span<const Count> wedges_per_anchor, Count budget);

// Per-thread dense counters for the batching backends, zero between uses.
class AggregationWorkspace {
 public:
  void prepare(std::size_t key_space);
  std::vector<Count>& counts(int worker) { return counts_[static_cast<std::size_t>(worker)]; }
  std::vector<VertexId>& touched(int worker) {
    return touched_[static_cast<std::size_t>(worker)];
  }

 private:
  std::size_t key_space_ = 0;
  std::vector<std::vector<Count>> counts_;
  std::vector<std::vector<VertexId>> touched_;
};

struct EngineStats {
  Count wedges = 0;
  Count max_anchor_wedges = 0;
  std::size_t batches = 0;  // batches or chunks
};

// Marker for callers that need only endpoint-pair groups.
struct NoWedgePass {};

// Anchored wedge aggregation shared by counting and peeling.
//
// Source contract:
//   std::size_t num_anchors() const;
//   VertexId anchor(std::size_t i) const;
//   Count wedge_count(std::size_t i) const;            // exact
//   template <class F> void for_each(std::size_t i, F&& f) const;
//       // f(VertexId other, const Wedge& w), other < key_space
//
// on_group(anchor, other, d) fires once per distinct (anchor, other) pair.
// on_wedge(w, d) fires once per wedge with its group size, unless OnWedge is
// NoWedgePass. Both may run concurrently.
template <class Source, class OnGroup, class OnWedge>
EngineStats aggregate_anchored(const Source& src, const AggregationConfig& cfg,
                               std::size_t key_space, AggregationWorkspace& ws,
                               OnGroup&& on_group, OnWedge&& on_wedge) {
  constexpr bool kWedgePass = !std::is_same_v<std::decay_t<OnWedge>, NoWedgePass>;
  const std::size_t na = src.num_anchors();
  std::vector<Count> per(na);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t i = 0; i < na; ++i) per[i] = src.wedge_count(i);

  EngineStats stats;
  for (Count c : per) {
    stats.wedges += c;
    stats.max_anchor_wedges = std::max(stats.max_anchor_wedges, c);
  }
  if (stats.wedges == 0) return stats;

  if (is_batching(cfg.method)) {
    const auto batches = batch_plan(per, cfg);
    stats.batches = batches.size();
    ws.prepare(key_space);
    for (const auto& [first, last] : batches) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::size_t i = first; i < last; ++i) {
        if (per[i] == 0) continue;
        auto& cnt = ws.counts(worker_id());
        auto& touched = ws.touched(worker_id());
        src.for_each(i, [&](VertexId other, const auto&) {
          if (cnt[other]++ == 0) touched.push_back(other);
        });
        const VertexId a = src.anchor(i);
        for (VertexId o : touched) on_group(a, o, cnt[o]);
        if constexpr (kWedgePass) {
          src.for_each(i, [&](VertexId other, const auto& w) { on_wedge(w, cnt[other]); });
        }
        for (VertexId o : touched) cnt[o] = 0;
        touched.clear();
      }
    }
    return stats;
  }

  const auto chunks = chunk_plan(per, cfg.max_wedges_in_flight);
  stats.batches = chunks.size();
  const std::uint64_t ks = key_space;
  for (const auto& [first, last] : chunks) {
    std::vector<KeyCount> table;
    if (last - first == 1 && per[first] > cfg.max_wedges_in_flight) {
      // Oversized anchor: aggregate budget-sized pieces and merge.
      std::vector<std::uint64_t> buf;
      buf.reserve(cfg.max_wedges_in_flight);
      auto flush = [&] {
        auto part = aggregate_keys(std::move(buf), cfg.method);
        table = merge_sum(table, part);
        buf = {};
        buf.reserve(cfg.max_wedges_in_flight);
      };
      src.for_each(first, [&](VertexId other, const auto&) {
        buf.push_back(first * ks + other);
        if (buf.size() == cfg.max_wedges_in_flight) flush();
      });
      if (!buf.empty()) flush();
    } else {
      std::vector<std::size_t> offset(last - first + 1, 0);
      for (std::size_t i = first; i < last; ++i) offset[i - first + 1] = offset[i - first] + per[i];
      std::vector<std::uint64_t> keys(offset.back());
#pragma omp parallel for schedule(dynamic, 64)
      for (std::size_t i = first; i < last; ++i) {
        std::size_t pos = offset[i - first];
        src.for_each(i, [&](VertexId other, const auto&) { keys[pos++] = i * ks + other; });
      }
      table = aggregate_keys(std::move(keys), cfg.method);
    }
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < table.size(); ++t) {
      on_group(src.anchor(table[t].key / ks), static_cast<VertexId>(table[t].key % ks),
               table[t].count);
    }
    if constexpr (kWedgePass) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::size_t i = first; i < last; ++i) {
        src.for_each(i, [&](VertexId other, const auto& w) {
          const std::uint64_t k = i * ks + other;
          auto it = std::lower_bound(table.begin(), table.end(), k,
                                     [](const KeyCount& e, std::uint64_t v) { return e.key < v; });
          on_wedge(w, it->count);
        });
      }
    }
  }
  return stats;
}

// Wedge source over a RankedGraph: anchors are all rank ids.
class RankedWedgeSource {
 public:
  RankedWedgeSource(const RankedGraph& rg, bool cache_opt) : rg_(rg), cache_opt_(cache_opt) {}
  std::size_t num_anchors() const { return rg_.num_vertices(); }
  VertexId anchor(std::size_t i) const { return static_cast<VertexId>(i); }
  Count wedge_count(std::size_t i) const {
    return anchor_wedge_count(rg_, static_cast<VertexId>(i), cache_opt_);
  }
  template <class F>
  void for_each(std::size_t i, F&& f) const {
    for_each_anchored_wedge(rg_, static_cast<VertexId>(i), cache_opt_, f);
  }

 private:
  const RankedGraph& rg_;
  bool cache_opt_;
};

// Endpoint-pair frequencies under the given backend.
WedgeCountTable get_freq(const RankedGraph& rg, const AggregationConfig& cfg, bool cache_opt,
                         EngineStats* stats = nullptr);

}  // namespace bfly
