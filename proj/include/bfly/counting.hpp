#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bfly/graph.hpp"
#include "bfly/ranking.hpp"
#include "bfly/wedges.hpp"

namespace bfly {

enum class CountMode { Total, Vertex, Edge };
std::string_view count_mode_name(CountMode m);
CountMode parse_count_mode(std::string_view name);

// How per-element butterfly contributions are combined.
enum class ButterflyAgg { Atomic, Reagg };
std::string_view butterfly_agg_name(ButterflyAgg a);
ButterflyAgg parse_butterfly_agg(std::string_view name);

struct CountConfig {
  RankKind rank = RankKind::ApproxDegree;
  AggregationConfig agg;
  ButterflyAgg butterfly_agg = ButterflyAgg::Atomic;
  bool cache_opt = false;
};

// Throws ConfigError for unsupported combinations (batching with reagg).
void validate(const CountConfig& cfg);

struct ButterflyCounts {
  CountMode mode = CountMode::Total;
  Count total = 0;
  std::vector<Count> per_u;     // vertex mode
  std::vector<Count> per_v;     // vertex mode
  std::vector<Count> per_edge;  // edge mode, indexed by EdgeId
  EngineStats stats;
};

Count count_total(const BipartiteGraph& g, const CountConfig& cfg, EngineStats* stats = nullptr);
ButterflyCounts count_per_vertex(const BipartiteGraph& g, const CountConfig& cfg);
ButterflyCounts count_per_edge(const BipartiteGraph& g, const CountConfig& cfg);
ButterflyCounts count_butterflies(const BipartiteGraph& g, CountMode mode, const CountConfig& cfg);

// Variants over an existing ranked view.
Count count_total(const RankedGraph& rg, const CountConfig& cfg, EngineStats* stats = nullptr);
ButterflyCounts count_per_vertex(const BipartiteGraph& g, const RankedGraph& rg,
                                 const CountConfig& cfg);
ButterflyCounts count_per_edge(const BipartiteGraph& g, const RankedGraph& rg,
                               const CountConfig& cfg);

enum class SparsifyMethod { Edge, Color };
std::string_view sparsify_method_name(SparsifyMethod m);
SparsifyMethod parse_sparsify_method(std::string_view name);

struct SparsifyConfig {
  SparsifyMethod method = SparsifyMethod::Edge;
  double p = 1.0;
  std::uint64_t seed = 0;
};

void validate(const SparsifyConfig& cfg);  // 0 < p <= 1

// Number of colors for colorful sparsification: ceil(1/p).
std::uint64_t color_count(double p);
// Stateless uniform draw in [0, 1) keyed by (seed, stream, id).
double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t id);

// Edge method keeps edge e iff keyed_uniform(seed, e) < p. Color method colors
// each vertex from its keyed draw and keeps same-colored edges. Vertex counts
// and labels are preserved.
BipartiteGraph sparsify(const BipartiteGraph& g, const SparsifyConfig& cfg);

// Scales a sampled total into an estimate: / p^4 (edge) or * c^3 with c
// colors (color).
double scale_estimate(Count sampled, const SparsifyConfig& cfg);

struct ApproxCount {
  Count sampled = 0;
  double estimate = 0.0;
};
ApproxCount approx_count_total(const BipartiteGraph& g, const SparsifyConfig& scfg,
                               const CountConfig& cfg);

}  // namespace bfly
