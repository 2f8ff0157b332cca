#include <algorithm>
#include <string>

#include "bfly/peeling.hpp"
#include "peel_driver.hpp"

namespace bfly {

using detail::kActive;
using detail::kPeeled;
using detail::kPeeling;
using detail::PeelState;

namespace {

// Every rank-retrieved wedge, grouped by endpoint pair. Groups holding a
// single wedge are dropped since they close no butterfly.
struct StoredWedges {
  std::vector<VertexId> group_e1;
  std::vector<VertexId> group_e2;
  std::vector<std::size_t> group_off;  // wedges of group i: [off[i], off[i+1])
  std::vector<VertexId> center;
  std::vector<EdgeId> edge1;  // edge (e1, center)
  std::vector<EdgeId> edge2;  // edge (e2, center)
  std::vector<std::size_t> group_of;

  std::size_t num_groups() const { return group_e1.size(); }
};

struct Raw {
  VertexId e2;
  VertexId c;
  EdgeId ed1;
  EdgeId ed2;
};

StoredWedges store_wedges(const RankedGraph& rg, Count cap) {
  const VertexId n = rg.num_vertices();
  const auto per = anchor_wedge_counts(rg, false);
  std::vector<std::size_t> off(std::size_t{n} + 1, 0);
  for (VertexId x = 0; x < n; ++x) off[x + 1] = off[x] + per[x];
  if (off[n] > cap) {
    throw ResourceError("storing " + std::to_string(off[n]) + " wedges exceeds the cap of " +
                        std::to_string(cap) + "; peel without stored wedges instead");
  }
  std::vector<Raw> raw(off[n]);
  std::vector<std::size_t> groups_at(std::size_t{n} + 1, 0);
  std::vector<std::size_t> kept_at(std::size_t{n} + 1, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (VertexId x = 0; x < n; ++x) {
    std::size_t pos = off[x];
    for_each_anchored_wedge(rg, x, false, [&](VertexId, const WedgeRef& w) {
      raw[pos++] = {w.e2, w.c, rg.edge_of_slot(w.slot_e1), rg.edge_of_slot(w.slot_e2)};
    });
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(off[x]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(off[x + 1]);
    std::sort(first, last, [](const Raw& a, const Raw& b) {
      return a.e2 != b.e2 ? a.e2 < b.e2 : a.c < b.c;
    });
    std::size_t groups = 0, kept = 0;
    for (auto it = first; it != last;) {
      auto end = it;
      while (end != last && end->e2 == it->e2) ++end;
      if (end - it >= 2) {
        ++groups;
        kept += static_cast<std::size_t>(end - it);
      }
      it = end;
    }
    groups_at[x + 1] = groups;
    kept_at[x + 1] = kept;
  }
  for (VertexId x = 0; x < n; ++x) {
    groups_at[x + 1] += groups_at[x];
    kept_at[x + 1] += kept_at[x];
  }

  StoredWedges sw;
  sw.group_e1.resize(groups_at[n]);
  sw.group_e2.resize(groups_at[n]);
  sw.group_off.resize(groups_at[n] + 1);
  sw.group_off[groups_at[n]] = kept_at[n];
  sw.center.resize(kept_at[n]);
  sw.edge1.resize(kept_at[n]);
  sw.edge2.resize(kept_at[n]);
  sw.group_of.resize(kept_at[n]);
#pragma omp parallel for schedule(dynamic, 64)
  for (VertexId x = 0; x < n; ++x) {
    std::size_t gi = groups_at[x];
    std::size_t wi = kept_at[x];
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(off[x]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(off[x + 1]);
    for (auto it = first; it != last;) {
      auto end = it;
      while (end != last && end->e2 == it->e2) ++end;
      if (end - it >= 2) {
        sw.group_e1[gi] = x;
        sw.group_e2[gi] = it->e2;
        sw.group_off[gi] = wi;
        for (auto w = it; w != end; ++w, ++wi) {
          sw.center[wi] = w->c;
          sw.edge1[wi] = w->ed1;
          sw.edge2[wi] = w->ed2;
          sw.group_of[wi] = gi;
        }
        ++gi;
      }
      it = end;
    }
  }
  return sw;
}

// CSR index from keys to values, values kept in insertion order per key.
struct Index {
  std::vector<std::size_t> off;
  std::vector<std::size_t> val;

  template <class Emit>
  static Index build(std::size_t num_keys, Emit&& emit) {
    Index ix;
    ix.off.assign(num_keys + 1, 0);
    emit([&](std::size_t k, std::size_t) { ++ix.off[k + 1]; });
    for (std::size_t k = 0; k < num_keys; ++k) ix.off[k + 1] += ix.off[k];
    ix.val.resize(ix.off[num_keys]);
    std::vector<std::size_t> fill(ix.off.begin(), ix.off.end() - 1);
    emit([&](std::size_t k, std::size_t v) { ix.val[fill[k]++] = v; });
    return ix;
  }
  std::span<const std::size_t> operator[](std::size_t k) const {
    return {val.data() + off[k], val.data() + off[k + 1]};
  }
};

Count wedge_cap(const PeelConfig& cfg) {
  return cfg.wedge_cap != 0 ? cfg.wedge_cap : cfg.agg.max_wedges_in_flight;
}

}  // namespace

Decomposition wpeel_vertices(const BipartiteGraph& g, const ButterflyCounts& counts,
                             const PeelConfig& cfg) {
  if (counts.mode != CountMode::Vertex) throw ContractError("peeling needs vertex-mode counts");
  const Side s = vertex_peel_side(g);
  const RankedGraph rg = preprocess(g, make_ranking(g, cfg.rank));
  const StoredWedges sw = store_wedges(rg, wedge_cap(cfg));
  const VertexId n = rg.num_vertices();

  // Peel-side index of each rank id (kNoVertex for the other side).
  std::vector<VertexId> index_of(n, kNoVertex);
  std::vector<VertexId> rank_of(g.num_side(s));
  for (VertexId x = 0; x < n; ++x) {
    const VertexId c = rg.original(x);
    if (g.side_of(c) == s) {
      index_of[x] = g.index_of(c);
      rank_of[g.index_of(c)] = x;
    }
  }
  const Index by_endpoint = Index::build(n, [&](auto&& put) {
    for (std::size_t gi = 0; gi < sw.num_groups(); ++gi) {
      put(sw.group_e1[gi], gi);
      put(sw.group_e2[gi], gi);
    }
  });
  const Index by_center = Index::build(n, [&](auto&& put) {
    for (std::size_t w = 0; w < sw.center.size(); ++w) put(sw.center[w], w);
  });

  auto out = detail::run_peeling(
      s == Side::U ? counts.per_u : counts.per_v, cfg.buckets,
      [&](const std::vector<ElementId>& peeled, PeelState& state) {
        const auto& status = state.status;
        const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(peeled.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
          const VertexId xa = rank_of[peeled[static_cast<std::size_t>(pi)]];
          // Butterflies whose lowest-ranked vertex is a or its partner.
          for (std::size_t gi : by_endpoint[xa]) {
            const VertexId other = sw.group_e1[gi] == xa ? sw.group_e2[gi] : sw.group_e1[gi];
            const VertexId u2 = index_of[other];
            if (status[u2] != kActive) continue;
            state.subtract(u2, choose2(sw.group_off[gi + 1] - sw.group_off[gi]));
          }
          // Butterflies whose lowest-ranked vertex is on the other side: a is
          // one of the two centers of a stored group.
          for (std::size_t w : by_center[xa]) {
            const std::size_t gi = sw.group_of[w];
            for (std::size_t w2 = sw.group_off[gi]; w2 < sw.group_off[gi + 1]; ++w2) {
              if (w2 == w) continue;
              const VertexId u2 = index_of[sw.center[w2]];
              if (status[u2] == kActive) state.subtract(u2, 1);
            }
          }
        }
      });
  out.mode = PeelMode::Vertex;
  out.peel_side = s;
  return out;
}

Decomposition wpeel_edges(const BipartiteGraph& g, const ButterflyCounts& counts,
                          const PeelConfig& cfg) {
  if (counts.mode != CountMode::Edge) throw ContractError("peeling needs edge-mode counts");
  const RankedGraph rg = preprocess(g, make_ranking(g, cfg.rank));
  const StoredWedges sw = store_wedges(rg, wedge_cap(cfg));
  // Per edge: stored wedges containing it, tagged with which of the wedge's
  // two edges it is (bit 0).
  const Index by_edge = Index::build(g.num_edges(), [&](auto&& put) {
    for (std::size_t w = 0; w < sw.center.size(); ++w) {
      put(sw.edge1[w], 2 * w);
      put(sw.edge2[w], 2 * w + 1);
    }
  });

  auto out = detail::run_peeling(
      counts.per_edge, cfg.buckets, [&](const std::vector<ElementId>& peeled, PeelState& state) {
        const auto& status = state.status;
        const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(peeled.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
          const EdgeId e = peeled[static_cast<std::size_t>(pi)];
          auto blocked = [&](EdgeId f) {
            return status[f] == kPeeled || (status[f] == kPeeling && f < e);
          };
          for (std::size_t tagged : by_edge[e]) {
            const std::size_t w = tagged >> 1;
            const bool second = tagged & 1;
            const EdgeId f1 = second ? sw.edge1[w] : sw.edge2[w];
            if (blocked(f1)) continue;
            const std::size_t gi = sw.group_of[w];
            for (std::size_t w2 = sw.group_off[gi]; w2 < sw.group_off[gi + 1]; ++w2) {
              if (w2 == w) continue;
              const EdgeId f2 = second ? sw.edge2[w2] : sw.edge1[w2];
              const EdgeId f3 = second ? sw.edge1[w2] : sw.edge2[w2];
              if (blocked(f2) || blocked(f3)) continue;
              for (EdgeId f : {f1, f2, f3}) {
                if (status[f] == kActive) state.subtract(f, 1);
              }
            }
          }
        }
      });
  out.mode = PeelMode::Edge;
  return out;
}

}  // namespace bfly
