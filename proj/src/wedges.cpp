#include "bfly/wedges.hpp"

namespace bfly {

Count anchor_wedge_count(const RankedGraph& rg, VertexId x, bool cache_opt) {
  Count total = 0;
  const std::size_t base = rg.slot_begin(x);
  if (!cache_opt) {
    for (std::size_t i = 0; i < rg.self_degree(x); ++i) total += rg.cut_degree(base + i);
    return total;
  }
  for (std::size_t i = 0; i < rg.degree(x); ++i) {
    const VertexId y = rg.slot_target(base + i);
    const VertexId bound = std::min(x, y);
    if (bound == 0) continue;
    auto ny = rg.neighbors(y);
    total += ny.size() - count_prefix_greater(ny, bound - 1);
  }
  return total;
}

std::vector<Count> anchor_wedge_counts(const RankedGraph& rg, bool cache_opt) {
  std::vector<Count> out(rg.num_vertices());
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId x = 0; x < rg.num_vertices(); ++x) out[x] = anchor_wedge_count(rg, x, cache_opt);
  return out;
}

Count WedgeCountTable::lookup(VertexId a, VertexId b) const {
  const std::uint64_t k = key(n, a, b);
  auto it = std::lower_bound(entries.begin(), entries.end(), k,
                             [](const KeyCount& e, std::uint64_t v) { return e.key < v; });
  return it != entries.end() && it->key == k ? it->count : 0;
}

Count WedgeCountTable::total_wedges() const {
  Count t = 0;
  for (const auto& e : entries) t += e.count;
  return t;
}

std::vector<AnchorRange> batch_plan(std::span<const Count> wedges_per_anchor,
                                    const AggregationConfig& cfg) {
  const std::size_t n = wedges_per_anchor.size();
  std::vector<AnchorRange> out;
  if (cfg.method == AggregationMethod::BatchWedgeAware) {
    const Count budget = cfg.max_wedges_in_flight;
    if (budget == 0) throw ConfigError("wedge budget must be positive");
    std::size_t first = 0;
    Count load = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Count w = wedges_per_anchor[i];
      if (w > budget) {
        throw ConfigError("wedge budget " + std::to_string(budget) +
                          " is below one vertex's wedge count " + std::to_string(w));
      }
      if (load + w > budget) {
        out.emplace_back(first, i);
        first = i;
        load = 0;
      }
      load += w;
    }
    if (first < n) out.emplace_back(first, n);
    return out;
  }
  const std::size_t size = std::max<std::size_t>(1, cfg.batch_vertices);
  for (std::size_t first = 0; first < n; first += size) {
    out.emplace_back(first, std::min(n, first + size));
  }
  return out;
}

std::vector<AnchorRange> batch_plan(const RankedGraph& rg, const AggregationConfig& cfg,
                                    bool cache_opt) {
  const auto per = anchor_wedge_counts(rg, cache_opt);
  return batch_plan(per, cfg);
}

std::vector<AnchorRange> chunk_plan(std::span<const Count> wedges_per_anchor, Count budget) {
  if (budget == 0) throw ConfigError("wedge budget must be positive");
  const std::size_t n = wedges_per_anchor.size();
  std::vector<AnchorRange> out;
  std::size_t first = 0;
  Count load = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Count w = wedges_per_anchor[i];
    if (load + w > budget && i > first) {
      out.emplace_back(first, i);
      first = i;
      load = 0;
    }
    load += w;
    if (load > budget) {
      out.emplace_back(first, i + 1);
      first = i + 1;
      load = 0;
    }
  }
  if (first < n) out.emplace_back(first, n);
  return out;
}

void AggregationWorkspace::prepare(std::size_t key_space) {
  const auto workers = static_cast<std::size_t>(num_workers());
  if (key_space != key_space_) {
    counts_.clear();
    touched_.clear();
    key_space_ = key_space;
  }
  while (counts_.size() < workers) {
    counts_.emplace_back(key_space_, 0);
    touched_.emplace_back();
  }
}

WedgeCountTable get_freq(const RankedGraph& rg, const AggregationConfig& cfg, bool cache_opt,
                         EngineStats* stats) {
  const VertexId n = rg.num_vertices();
  std::vector<std::vector<KeyCount>> local(static_cast<std::size_t>(num_workers()));
  AggregationWorkspace ws;
  auto st = aggregate_anchored(
      RankedWedgeSource(rg, cache_opt), cfg, n, ws,
      [&](VertexId a, VertexId o, Count d) {
        local[static_cast<std::size_t>(worker_id())].push_back({WedgeCountTable::key(n, a, o), d});
      },
      NoWedgePass{});
  if (stats) *stats = st;
  WedgeCountTable table;
  table.n = n;
  for (auto& l : local) table.entries.insert(table.entries.end(), l.begin(), l.end());
  parallel_sort(std::span<KeyCount>(table.entries));
  return table;
}

}  // namespace bfly
