#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfly/types.hpp"

namespace bfly {

// Immutable bipartite graph in CSR form, stored from both sides.
//
// U-side lists hold V indices and V-side lists hold U indices, each sorted
// ascending. The EdgeId of (u, v) is the position of v inside the U-side
// neighbor array, so edge ids are dense in [0, m) and grouped by u.
//
// Rankings work over a combined numbering of all nU + nV vertices in which
// the V side comes first: v -> v, u -> nV + u.
class BipartiteGraph {
 public:
  BipartiteGraph() : offsets_u_(1, 0), offsets_v_(1, 0) {}

  // Builds a graph from an edge list. Duplicate edges are collapsed; indices
  // must be in range. Labels (original ids) are optional; when empty the
  // label of a vertex is its index.
  static BipartiteGraph from_edges(VertexId num_u, VertexId num_v,
                                   std::vector<std::pair<VertexId, VertexId>> edges,
                                   std::vector<std::uint64_t> labels_u = {},
                                   std::vector<std::uint64_t> labels_v = {});

  // Builds from a U-side CSR. Lists must be strictly increasing.
  static BipartiteGraph from_csr(VertexId num_u, VertexId num_v,
                                 std::vector<EdgeId> offsets_u,
                                 std::vector<VertexId> adj_u,
                                 std::vector<std::uint64_t> labels_u = {},
                                 std::vector<std::uint64_t> labels_v = {});

  VertexId num_u() const { return num_u_; }
  VertexId num_v() const { return num_v_; }
  VertexId num_side(Side s) const { return s == Side::U ? num_u_ : num_v_; }
  std::size_t num_vertices() const { return std::size_t{num_u_} + num_v_; }
  EdgeId num_edges() const { return adj_u_.size(); }

  std::span<const VertexId> neighbors_u(VertexId u) const {
    return {adj_u_.data() + offsets_u_[u], adj_u_.data() + offsets_u_[u + 1]};
  }
  std::span<const VertexId> neighbors_v(VertexId v) const {
    return {adj_v_.data() + offsets_v_[v], adj_v_.data() + offsets_v_[v + 1]};
  }
  std::span<const VertexId> neighbors(Side s, VertexId x) const {
    return s == Side::U ? neighbors_u(x) : neighbors_v(x);
  }
  // Edge ids aligned with neighbors_v(v).
  std::span<const EdgeId> edge_ids_v(VertexId v) const {
    return {edge_of_v_slot_.data() + offsets_v_[v],
            edge_of_v_slot_.data() + offsets_v_[v + 1]};
  }
  EdgeId first_edge_u(VertexId u) const { return offsets_u_[u]; }

  std::size_t degree_u(VertexId u) const { return offsets_u_[u + 1] - offsets_u_[u]; }
  std::size_t degree_v(VertexId v) const { return offsets_v_[v + 1] - offsets_v_[v]; }
  std::size_t degree(Side s, VertexId x) const {
    return s == Side::U ? degree_u(x) : degree_v(x);
  }

  VertexId edge_u(EdgeId e) const { return edge_u_[e]; }
  VertexId edge_v(EdgeId e) const { return adj_u_[e]; }
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

  std::uint64_t label_u(VertexId u) const { return labels_u_.empty() ? u : labels_u_[u]; }
  std::uint64_t label_v(VertexId v) const { return labels_v_.empty() ? v : labels_v_[v]; }
  std::uint64_t label(Side s, VertexId x) const {
    return s == Side::U ? label_u(x) : label_v(x);
  }
  const std::vector<std::uint64_t>& labels_u() const { return labels_u_; }
  const std::vector<std::uint64_t>& labels_v() const { return labels_v_; }

  // Combined numbering.
  VertexId combined(Side s, VertexId x) const { return s == Side::V ? x : num_v_ + x; }
  Side side_of(VertexId c) const { return c < num_v_ ? Side::V : Side::U; }
  VertexId index_of(VertexId c) const { return c < num_v_ ? c : c - num_v_; }

  const std::vector<EdgeId>& offsets_u() const { return offsets_u_; }
  const std::vector<VertexId>& adjacency_u() const { return adj_u_; }

  // Sum over vertices x of side s of C(deg(x), 2): the number of wedges
  // centered on side s, equivalently with endpoints on the other side.
  Count wedges_centered_on(Side s) const;

  bool operator==(const BipartiteGraph& o) const;

 private:
  void build_mirror();

  VertexId num_u_ = 0;
  VertexId num_v_ = 0;
  std::vector<EdgeId> offsets_u_;
  std::vector<VertexId> adj_u_;
  std::vector<VertexId> edge_u_;
  std::vector<EdgeId> offsets_v_;
  std::vector<VertexId> adj_v_;
  std::vector<EdgeId> edge_of_v_slot_;
  std::vector<std::uint64_t> labels_u_;
  std::vector<std::uint64_t> labels_v_;
};

// The side whose vertices serve as wedge endpoints with the fewest wedges,
// i.e. the side X minimizing sum_{y not in X} C(deg(y), 2). Ties pick U.
Side fewest_wedge_endpoint_side(const BipartiteGraph& g);

struct LoadOptions {
  bool zero_indexed = false;
  bool allow_comments = true;
};

// Text edge list: one "u v" pair per line; '%' and '#' lines are comments.
// Additional columns (weights, timestamps) are ignored. Ids are compacted per
// side in order of first appearance and kept as labels.
BipartiteGraph load_edge_list(std::istream& in, const LoadOptions& opts = {});
BipartiteGraph load_edge_list_string(const std::string& text, const LoadOptions& opts = {});

// Binary CSR cache. Little-endian, every field 64-bit:
//   magic "BFLYCSR\0", version, nU, nV, m,
//   offsets_u[nU+1], adj_u[m], offsets_v[nV+1], adj_v[m], labels_u[nU], labels_v[nV]
void save_binary(const BipartiteGraph& g, std::ostream& out);
BipartiteGraph load_binary(std::istream& in);

// Loads either format, detected by the magic bytes.
BipartiteGraph load_graph_file(const std::string& path, const LoadOptions& opts = {});
void save_binary_file(const BipartiteGraph& g, const std::string& path);

struct OracleCounts {
  Count total = 0;
  std::vector<Count> per_u;
  std::vector<Count> per_v;
  std::vector<Count> per_edge;
};

// Exhaustive reference counts: enumerates every pair of U vertices and
// intersects their neighborhoods. Quadratic in nU; meant for small graphs.
OracleCounts brute_force_butterflies(const BipartiteGraph& g);

}  // namespace bfly
