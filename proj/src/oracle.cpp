#include <algorithm>

#include "bfly/graph.hpp"

namespace bfly {

OracleCounts brute_force_butterflies(const BipartiteGraph& g) {
  OracleCounts out;
  out.per_u.assign(g.num_u(), 0);
  out.per_v.assign(g.num_v(), 0);
  out.per_edge.assign(g.num_edges(), 0);

  std::vector<VertexId> common;
  for (VertexId u1 = 0; u1 < g.num_u(); ++u1) {
    for (VertexId u2 = u1 + 1; u2 < g.num_u(); ++u2) {
      auto a = g.neighbors_u(u1);
      auto b = g.neighbors_u(u2);
      common.clear();
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      const Count c = common.size();
      if (c < 2) continue;
      const Count pairs = choose2(c);
      out.total += pairs;
      out.per_u[u1] += pairs;
      out.per_u[u2] += pairs;
      for (VertexId v : common) {
        out.per_v[v] += c - 1;
        out.per_edge[*g.find_edge(u1, v)] += c - 1;
        out.per_edge[*g.find_edge(u2, v)] += c - 1;
      }
    }
  }

  Count sum_u = 0;
  for (Count x : out.per_u) sum_u += x;
  if (sum_u != 2 * out.total) throw Error("oracle inconsistency: per-U sum != 2 * total");
  return out;
}

}  // namespace bfly
