#pragma once

#include <string_view>
#include <vector>

#include "bfly/bucketing.hpp"
#include "bfly/counting.hpp"
#include "bfly/graph.hpp"
#include "bfly/ranking.hpp"
#include "bfly/wedges.hpp"

namespace bfly {

enum class PeelMode { Vertex, Edge };
std::string_view peel_mode_name(PeelMode m);
PeelMode parse_peel_mode(std::string_view name);

struct PeelConfig {
  AggregationConfig agg;
  BucketBackend buckets = BucketBackend::Dense;
  bool store_wedges = false;
  // Ranking used to retrieve wedges for the wedge-storing variants.
  RankKind rank = RankKind::ApproxDegree;
  // Maximum stored wedges; 0 means agg.max_wedges_in_flight.
  Count wedge_cap = 0;
};

struct Decomposition {
  PeelMode mode = PeelMode::Vertex;
  Side peel_side = Side::U;        // vertex mode
  std::vector<Count> number;       // by peel-side vertex index, or by EdgeId
  std::uint64_t rounds = 0;        // rho
  Count max_b = 0;                 // largest initial butterfly count
  std::vector<Count> round_keys;   // popped key per round
  bool operator==(const Decomposition&) const = default;
};

// The side whose vertices are peeled in vertex mode.
inline Side vertex_peel_side(const BipartiteGraph& g) { return fewest_wedge_endpoint_side(g); }

// counts must be vertex-mode (vertex peeling) or edge-mode (edge peeling);
// otherwise ContractError.
Decomposition peel_vertices(const BipartiteGraph& g, const ButterflyCounts& counts,
                            const PeelConfig& cfg);
Decomposition peel_edges(const BipartiteGraph& g, const ButterflyCounts& counts,
                         const PeelConfig& cfg);
// Wedge-storing variants. Throw ResourceError when the stored wedges would
// exceed the cap.
Decomposition wpeel_vertices(const BipartiteGraph& g, const ButterflyCounts& counts,
                             const PeelConfig& cfg);
Decomposition wpeel_edges(const BipartiteGraph& g, const ButterflyCounts& counts,
                          const PeelConfig& cfg);

// Dispatches on mode and cfg.store_wedges.
Decomposition peel(const BipartiteGraph& g, const ButterflyCounts& counts, PeelMode mode,
                   const PeelConfig& cfg);

// Counts then peels.
Decomposition decompose(const BipartiteGraph& g, PeelMode mode, const CountConfig& ccfg,
                        const PeelConfig& pcfg);

}  // namespace bfly
