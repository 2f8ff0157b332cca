#include "bfly/ranking.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "bfly/parallel.hpp"

namespace bfly {

std::string_view rank_kind_name(RankKind k) {
  switch (k) {
    case RankKind::Side: return "side";
    case RankKind::Degree: return "degree";
    case RankKind::ApproxDegree: return "adegree";
    case RankKind::CoDegeneracy: return "codegen";
    case RankKind::ApproxCoDegeneracy: return "acodegen";
  }
  return "?";
}

RankKind parse_rank_kind(std::string_view name) {
  for (auto k : {RankKind::Side, RankKind::Degree, RankKind::ApproxDegree,
                 RankKind::CoDegeneracy, RankKind::ApproxCoDegeneracy}) {
    if (rank_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown ranking '" + std::string(name) + "'");
}

Ranking Ranking::from_order(RankKind kind, std::vector<VertexId> order) {
  Ranking r;
  r.kind = kind;
  r.rank_of.assign(order.size(), kNoVertex);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= order.size() || r.rank_of[order[i]] != kNoVertex) {
      throw ContractError("ranking order is not a permutation");
    }
    r.rank_of[order[i]] = static_cast<VertexId>(i);
  }
  r.order = std::move(order);
  return r;
}

bool Ranking::is_permutation() const {
  if (order.size() != rank_of.size()) return false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= rank_of.size() || rank_of[order[i]] != i) return false;
  }
  return true;
}

int log_degree_bucket(std::size_t d) {
  return d == 0 ? -1 : static_cast<int>(std::bit_width(d)) - 1;
}

namespace {

std::vector<std::size_t> combined_degrees(const BipartiteGraph& g) {
  std::vector<std::size_t> deg(g.num_vertices());
  for (VertexId v = 0; v < g.num_v(); ++v) deg[g.combined(Side::V, v)] = g.degree_v(v);
  for (VertexId u = 0; u < g.num_u(); ++u) deg[g.combined(Side::U, u)] = g.degree_u(u);
  return deg;
}

template <class KeyFn>
Ranking rank_by_key_desc(const BipartiteGraph& g, RankKind kind, KeyFn key) {
  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return key(a) > key(b); });
  return Ranking::from_order(kind, std::move(order));
}

}  // namespace

Ranking rank_side(const BipartiteGraph& g) {
  const Side first = fewest_wedge_endpoint_side(g);
  std::vector<VertexId> order;
  order.reserve(g.num_vertices());
  for (Side s : {first, other_side(first)}) {
    for (VertexId x = 0; x < g.num_side(s); ++x) order.push_back(g.combined(s, x));
  }
  return Ranking::from_order(RankKind::Side, std::move(order));
}

Ranking rank_degree(const BipartiteGraph& g) {
  auto deg = combined_degrees(g);
  return rank_by_key_desc(g, RankKind::Degree, [&](VertexId c) { return deg[c]; });
}

Ranking rank_approx_degree(const BipartiteGraph& g) {
  auto deg = combined_degrees(g);
  return rank_by_key_desc(g, RankKind::ApproxDegree,
                          [&](VertexId c) { return log_degree_bucket(deg[c]); });
}

// Repeatedly removes every remaining vertex of maximum (log-)degree in the
// induced subgraph. Keys only decrease, so the max cursor only moves down and
// each vertex sits in exactly one live bucket entry.
Ranking rank_codegeneracy(const BipartiteGraph& g, bool approximate) {
  const std::size_t n = g.num_vertices();
  auto deg = combined_degrees(g);
  auto key_of = [&](std::size_t d) -> std::size_t {
    return approximate ? static_cast<std::size_t>(log_degree_bucket(d) + 1) : d;
  };
  std::vector<std::size_t> key(n);
  std::size_t max_key = 0;
  for (std::size_t c = 0; c < n; ++c) {
    key[c] = key_of(deg[c]);
    max_key = std::max(max_key, key[c]);
  }
  std::vector<std::vector<VertexId>> buckets(max_key + 1);
  for (std::size_t c = 0; c < n; ++c) buckets[key[c]].push_back(static_cast<VertexId>(c));

  std::vector<char> removed(n, 0);
  std::vector<VertexId> order;
  order.reserve(n);
  std::vector<VertexId> round;
  std::size_t cursor = max_key;
  while (order.size() < n) {
    round.clear();
    while (round.empty()) {
      for (VertexId c : buckets[cursor]) {
        if (!removed[c] && key[c] == cursor) round.push_back(c);
      }
      buckets[cursor].clear();
      if (round.empty()) --cursor;
    }
    std::sort(round.begin(), round.end());
    for (VertexId c : round) {
      removed[c] = 1;
      order.push_back(c);
    }
    for (VertexId c : round) {
      const Side s = g.side_of(c);
      for (VertexId y : g.neighbors(s, g.index_of(c))) {
        const VertexId cy = g.combined(other_side(s), y);
        if (removed[cy]) continue;
        --deg[cy];
        const std::size_t k = key_of(deg[cy]);
        if (k != key[cy]) {
          key[cy] = k;
          buckets[k].push_back(cy);
        }
      }
    }
  }
  return Ranking::from_order(approximate ? RankKind::ApproxCoDegeneracy : RankKind::CoDegeneracy,
                             std::move(order));
}

Ranking make_ranking(const BipartiteGraph& g, RankKind kind) {
  switch (kind) {
    case RankKind::Side: return rank_side(g);
    case RankKind::Degree: return rank_degree(g);
    case RankKind::ApproxDegree: return rank_approx_degree(g);
    case RankKind::CoDegeneracy: return rank_codegeneracy(g, false);
    case RankKind::ApproxCoDegeneracy: return rank_codegeneracy(g, true);
  }
  throw ConfigError("unknown ranking");
}

std::size_t count_prefix_greater(std::span<const VertexId> decreasing, VertexId threshold) {
  // Exponential probe for an index whose entry is <= threshold.
  std::size_t hi = 1;
  while (hi <= decreasing.size() && decreasing[hi - 1] > threshold) hi <<= 1;
  std::size_t lo = hi >> 1;
  hi = std::min(hi, decreasing.size());
  auto first = decreasing.begin() + static_cast<std::ptrdiff_t>(lo);
  auto last = decreasing.begin() + static_cast<std::ptrdiff_t>(hi);
  auto it = std::partition_point(first, last, [&](VertexId y) { return y > threshold; });
  return static_cast<std::size_t>(it - decreasing.begin());
}

RankedGraph preprocess(const BipartiteGraph& g, const Ranking& r) {
  if (r.size() != g.num_vertices() || !r.is_permutation()) {
    throw ContractError("ranking does not match graph");
  }
  const VertexId n = static_cast<VertexId>(g.num_vertices());
  RankedGraph rg;
  rg.ranking_ = r;
  rg.offsets_.assign(std::size_t{n} + 1, 0);
  rg.side_.resize(n);
  for (VertexId x = 0; x < n; ++x) {
    const VertexId c = r.order[x];
    rg.side_[x] = g.side_of(c);
    rg.offsets_[x + 1] = rg.offsets_[x] + g.degree(g.side_of(c), g.index_of(c));
  }
  const std::size_t slots = rg.offsets_[n];
  rg.adj_.resize(slots);
  rg.edge_of_slot_.resize(slots);
  rg.self_deg_.resize(n);
  rg.cut_deg_.resize(slots);

#pragma omp parallel
  {
    std::vector<std::pair<VertexId, EdgeId>> buf;
#pragma omp for schedule(dynamic, 256)
    for (VertexId x = 0; x < n; ++x) {
      const VertexId c = r.order[x];
      const Side s = g.side_of(c);
      const VertexId idx = g.index_of(c);
      auto nbrs = g.neighbors(s, idx);
      buf.clear();
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const EdgeId e = s == Side::U ? g.first_edge_u(idx) + i : g.edge_ids_v(idx)[i];
        buf.emplace_back(r.rank_of[g.combined(other_side(s), nbrs[i])], e);
      }
      std::sort(buf.begin(), buf.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      const std::size_t base = rg.offsets_[x];
      for (std::size_t i = 0; i < buf.size(); ++i) {
        rg.adj_[base + i] = buf[i].first;
        rg.edge_of_slot_[base + i] = buf[i].second;
      }
    }
#pragma omp for schedule(dynamic, 256)
    for (VertexId x = 0; x < n; ++x) {
      rg.self_deg_[x] = static_cast<std::uint32_t>(count_prefix_greater(rg.neighbors(x), x));
      for (std::size_t s = rg.offsets_[x]; s < rg.offsets_[x + 1]; ++s) {
        rg.cut_deg_[s] =
            static_cast<std::uint32_t>(count_prefix_greater(rg.neighbors(rg.adj_[s]), x));
      }
    }
  }
  return rg;
}

Count count_retrieved_wedges(const RankedGraph& rg) {
  Count total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 256)
  for (VertexId x = 0; x < rg.num_vertices(); ++x) {
    const std::size_t base = rg.slot_begin(x);
    for (std::size_t i = 0; i < rg.self_degree(x); ++i) total += rg.cut_degree(base + i);
  }
  return total;
}

WedgeMetric wedge_metric(const BipartiteGraph& g, const Ranking& r) {
  WedgeMetric m;
  m.side_wedges = count_retrieved_wedges(preprocess(g, rank_side(g)));
  m.ranked_wedges = r.kind == RankKind::Side && r.order == rank_side(g).order
                        ? m.side_wedges
                        : count_retrieved_wedges(preprocess(g, r));
  if (m.side_wedges != 0) {
    m.f = (static_cast<double>(m.side_wedges) - static_cast<double>(m.ranked_wedges)) /
          static_cast<double>(m.side_wedges);
  }
  return m;
}

RankKind choose_ranking_auto(const BipartiteGraph& g) {
  return wedge_metric_f(g, rank_approx_degree(g)) < kSideOrderThreshold ? RankKind::Side
                                                                         : RankKind::ApproxDegree;
}

}  // namespace bfly
