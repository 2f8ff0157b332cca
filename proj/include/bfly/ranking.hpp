#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfly/graph.hpp"

namespace bfly {

enum class RankKind { Side, Degree, ApproxDegree, CoDegeneracy, ApproxCoDegeneracy };

std::string_view rank_kind_name(RankKind k);
RankKind parse_rank_kind(std::string_view name);  // throws ConfigError

// A total order on all vertices, expressed over the combined numbering.
// Rank 0 is processed first; wedges are retrieved from their lowest-ranked
// endpoint.
struct Ranking {
  RankKind kind = RankKind::Side;
  std::vector<VertexId> order;    // rank -> combined id
  std::vector<VertexId> rank_of;  // combined id -> rank

  static Ranking from_order(RankKind kind, std::vector<VertexId> order);
  std::size_t size() const { return order.size(); }
  bool is_permutation() const;
};

Ranking rank_side(const BipartiteGraph& g);
Ranking rank_degree(const BipartiteGraph& g);
Ranking rank_approx_degree(const BipartiteGraph& g);
Ranking rank_codegeneracy(const BipartiteGraph& g, bool approximate);
Ranking make_ranking(const BipartiteGraph& g, RankKind kind);

// floor(log2(d)), with -1 for d == 0.
int log_degree_bucket(std::size_t d);

// Rank-renamed unipartite view of a bipartite graph.
//
// Every adjacency list is sorted by decreasing rank, so the neighbors ranked
// above any threshold form a prefix. For each directed slot (x -> y) the
// graph caches how many of y's neighbors outrank x (deg_x(y)); this bounds
// the inner loop of wedge retrieval from x through center y.
class RankedGraph {
 public:
  VertexId num_vertices() const { return static_cast<VertexId>(offsets_.size() - 1); }
  std::size_t num_slots() const { return adj_.size(); }

  std::span<const VertexId> neighbors(VertexId x) const {
    return {adj_.data() + offsets_[x], adj_.data() + offsets_[x + 1]};
  }
  std::size_t slot_begin(VertexId x) const { return offsets_[x]; }
  std::size_t degree(VertexId x) const { return offsets_[x + 1] - offsets_[x]; }
  VertexId slot_target(std::size_t slot) const { return adj_[slot]; }

  // deg_x(x): number of neighbors of x ranked above x.
  std::size_t self_degree(VertexId x) const { return self_deg_[x]; }
  // For slot (x -> y): deg_x(y), the number of y's neighbors ranked above x.
  std::size_t cut_degree(std::size_t slot) const { return cut_deg_[slot]; }
  // Original edge id of the edge behind a slot.
  EdgeId edge_of_slot(std::size_t slot) const { return edge_of_slot_[slot]; }

  Side side(VertexId x) const { return side_[x]; }
  VertexId original(VertexId x) const { return ranking_.order[x]; }
  const Ranking& ranking() const { return ranking_; }

  friend RankedGraph preprocess(const BipartiteGraph& g, const Ranking& r);

 private:
  Ranking ranking_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adj_;
  std::vector<std::uint32_t> self_deg_;
  std::vector<std::uint32_t> cut_deg_;
  std::vector<EdgeId> edge_of_slot_;
  std::vector<Side> side_;
};

RankedGraph preprocess(const BipartiteGraph& g, const Ranking& r);

// Number of leading entries of a decreasing list that are strictly greater
// than threshold, found by exponential then binary search.
std::size_t count_prefix_greater(std::span<const VertexId> decreasing, VertexId threshold);

// Total wedges retrieved under the ranking baked into rg:
// sum_x sum_{y in N_x(x)} deg_x(y).
Count count_retrieved_wedges(const RankedGraph& rg);

struct WedgeMetric {
  Count side_wedges = 0;
  Count ranked_wedges = 0;
  double f = 0.0;  // (side - ranked) / side, 0 when side == 0
};

WedgeMetric wedge_metric(const BipartiteGraph& g, const Ranking& r);
inline double wedge_metric_f(const BipartiteGraph& g, const Ranking& r) {
  return wedge_metric(g, r).f;
}

inline constexpr double kSideOrderThreshold = 0.1;

// Side order when approximate-degree order saves under 10% of the wedges,
// approximate degree order otherwise.
RankKind choose_ranking_auto(const BipartiteGraph& g);

}  // namespace bfly
