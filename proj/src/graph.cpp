#include "bfly/graph.hpp"

#include <algorithm>

namespace bfly {

BipartiteGraph BipartiteGraph::from_edges(VertexId num_u, VertexId num_v,
                                          std::vector<std::pair<VertexId, VertexId>> edges,
                                          std::vector<std::uint64_t> labels_u,
                                          std::vector<std::uint64_t> labels_v) {
  for (const auto& [u, v] : edges) {
    if (u >= num_u || v >= num_v) throw Error("edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<EdgeId> offsets(std::size_t{num_u} + 1, 0);
  std::vector<VertexId> adj(edges.size());
  for (const auto& e : edges) ++offsets[e.first + 1];
  for (VertexId u = 0; u < num_u; ++u) offsets[u + 1] += offsets[u];
  for (std::size_t i = 0; i < edges.size(); ++i) adj[i] = edges[i].second;
  return from_csr(num_u, num_v, std::move(offsets), std::move(adj), std::move(labels_u),
                  std::move(labels_v));
}

BipartiteGraph BipartiteGraph::from_csr(VertexId num_u, VertexId num_v,
                                        std::vector<EdgeId> offsets_u,
                                        std::vector<VertexId> adj_u,
                                        std::vector<std::uint64_t> labels_u,
                                        std::vector<std::uint64_t> labels_v) {
  if (offsets_u.size() != std::size_t{num_u} + 1 || offsets_u.front() != 0 ||
      offsets_u.back() != adj_u.size()) {
    throw Error("malformed CSR offsets");
  }
  if (!labels_u.empty() && labels_u.size() != num_u) throw Error("label count mismatch (U)");
  if (!labels_v.empty() && labels_v.size() != num_v) throw Error("label count mismatch (V)");
  for (VertexId u = 0; u < num_u; ++u) {
    if (offsets_u[u] > offsets_u[u + 1]) throw Error("malformed CSR offsets");
    for (EdgeId i = offsets_u[u]; i < offsets_u[u + 1]; ++i) {
      if (adj_u[i] >= num_v) throw Error("neighbor index out of range");
      if (i > offsets_u[u] && adj_u[i] <= adj_u[i - 1]) {
        throw Error("CSR neighbor lists must be strictly increasing");
      }
    }
  }
  BipartiteGraph g;
  g.num_u_ = num_u;
  g.num_v_ = num_v;
  g.offsets_u_ = std::move(offsets_u);
  g.adj_u_ = std::move(adj_u);
  g.labels_u_ = std::move(labels_u);
  g.labels_v_ = std::move(labels_v);
  g.build_mirror();
  return g;
}

void BipartiteGraph::build_mirror() {
  const EdgeId m = adj_u_.size();
  edge_u_.resize(m);
  offsets_v_.assign(std::size_t{num_v_} + 1, 0);
  for (VertexId u = 0; u < num_u_; ++u) {
    for (EdgeId e = offsets_u_[u]; e < offsets_u_[u + 1]; ++e) edge_u_[e] = u;
  }
  for (EdgeId e = 0; e < m; ++e) ++offsets_v_[adj_u_[e] + 1];
  for (VertexId v = 0; v < num_v_; ++v) offsets_v_[v + 1] += offsets_v_[v];
  adj_v_.resize(m);
  edge_of_v_slot_.resize(m);
  std::vector<EdgeId> cursor(offsets_v_.begin(), offsets_v_.end() - 1);
  // Edges are visited in increasing u, so each V list comes out sorted.
  for (EdgeId e = 0; e < m; ++e) {
    const EdgeId slot = cursor[adj_u_[e]]++;
    adj_v_[slot] = edge_u_[e];
    edge_of_v_slot_[slot] = e;
  }
}

std::optional<EdgeId> BipartiteGraph::find_edge(VertexId u, VertexId v) const {
  if (u >= num_u_ || v >= num_v_) return std::nullopt;
  auto nbrs = neighbors_u(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return std::nullopt;
  return offsets_u_[u] + static_cast<EdgeId>(it - nbrs.begin());
}

Count BipartiteGraph::wedges_centered_on(Side s) const {
  Count total = 0;
  for (VertexId x = 0; x < num_side(s); ++x) total += choose2(degree(s, x));
  return total;
}

bool BipartiteGraph::operator==(const BipartiteGraph& o) const {
  if (num_u_ != o.num_u_ || num_v_ != o.num_v_ || offsets_u_ != o.offsets_u_ || adj_u_ != o.adj_u_) {
    return false;
  }
  // Empty label vectors mean identity labels.
  for (VertexId u = 0; u < num_u_; ++u) {
    if (label_u(u) != o.label_u(u)) return false;
  }
  for (VertexId v = 0; v < num_v_; ++v) {
    if (label_v(v) != o.label_v(v)) return false;
  }
  return true;
}

Side fewest_wedge_endpoint_side(const BipartiteGraph& g) {
  // Endpoints on U means centers on V.
  const Count with_u_endpoints = g.wedges_centered_on(Side::V);
  const Count with_v_endpoints = g.wedges_centered_on(Side::U);
  return with_v_endpoints < with_u_endpoints ? Side::V : Side::U;
}

}  // namespace bfly
