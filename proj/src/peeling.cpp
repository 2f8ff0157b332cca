#include "bfly/peeling.hpp"

#include <string>

#include "peel_driver.hpp"

namespace bfly {

using detail::kActive;
using detail::kPeeled;
using detail::kPeeling;
using detail::PeelState;

std::string_view peel_mode_name(PeelMode m) { return m == PeelMode::Vertex ? "vertex" : "edge"; }

PeelMode parse_peel_mode(std::string_view name) {
  if (name == "vertex") return PeelMode::Vertex;
  if (name == "edge") return PeelMode::Edge;
  throw ConfigError("unknown peel mode '" + std::string(name) + "'");
}

namespace {

struct NoPayload {};

// Wedges (a, u2, v) for a in the peeled set, v in N(a), u2 in N(v) active.
class PeelWedgeSource {
 public:
  PeelWedgeSource(const BipartiteGraph& g, Side s, std::span<const ElementId> anchors,
                  const std::vector<std::uint8_t>& status)
      : g_(g), s_(s), anchors_(anchors), status_(status) {}

  std::size_t num_anchors() const { return anchors_.size(); }
  VertexId anchor(std::size_t i) const { return static_cast<VertexId>(anchors_[i]); }
  Count wedge_count(std::size_t i) const {
    Count c = 0;
    for_each(i, [&](VertexId, NoPayload) { ++c; });
    return c;
  }
  template <class F>
  void for_each(std::size_t i, F&& f) const {
    for (VertexId v : g_.neighbors(s_, anchor(i))) {
      for (VertexId u2 : g_.neighbors(other_side(s_), v)) {
        if (status_[u2] == kActive) f(u2, NoPayload{});
      }
    }
  }

 private:
  const BipartiteGraph& g_;
  Side s_;
  std::span<const ElementId> anchors_;
  const std::vector<std::uint8_t>& status_;
};

void require_mode(const ButterflyCounts& counts, CountMode mode) {
  if (counts.mode != mode) {
    throw ContractError("peeling needs " + std::string(count_mode_name(mode)) +
                        "-mode butterfly counts");
  }
}

}  // namespace

Decomposition peel_vertices(const BipartiteGraph& g, const ButterflyCounts& counts,
                            const PeelConfig& cfg) {
  require_mode(counts, CountMode::Vertex);
  const Side s = vertex_peel_side(g);
  AggregationWorkspace ws;
  auto out = detail::run_peeling(
      s == Side::U ? counts.per_u : counts.per_v, cfg.buckets,
      [&](const std::vector<ElementId>& peeled, PeelState& state) {
        aggregate_anchored(
            PeelWedgeSource(g, s, peeled, state.status), cfg.agg, g.num_side(s), ws,
            [&](VertexId, VertexId u2, Count d) { state.subtract(u2, choose2(d)); },
            NoWedgePass{});
      });
  out.mode = PeelMode::Vertex;
  out.peel_side = s;
  return out;
}

Decomposition peel_edges(const BipartiteGraph& g, const ButterflyCounts& counts,
                         const PeelConfig& cfg) {
  (void)cfg;
  require_mode(counts, CountMode::Edge);
  const std::uint64_t nv = g.num_v();
  ConcurrentCountTable edge_index(g.num_edges());
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId u = 0; u < g.num_u(); ++u) {
    auto nb = g.neighbors_u(u);
    for (std::size_t i = 0; i < nb.size(); ++i) edge_index.add(u * nv + nb[i], g.first_edge_u(u) + i + 1);
  }
  auto find_edge = [&](VertexId u, VertexId v) -> std::optional<EdgeId> {
    auto hit = edge_index.find(u * nv + v);
    if (!hit) return std::nullopt;
    return *hit - 1;
  };

  auto out = detail::run_peeling(
      counts.per_edge, cfg.buckets, [&](const std::vector<ElementId>& peeled, PeelState& state) {
        const auto& status = state.status;
        const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(peeled.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
          const EdgeId e = peeled[static_cast<std::size_t>(pi)];
          // A butterfly is charged to its lowest-id edge among those being
          // peeled, and skipped if it lost an edge in an earlier round.
          auto blocked = [&](EdgeId f) {
            return status[f] == kPeeled || (status[f] == kPeeling && f < e);
          };
          const VertexId u1 = g.edge_u(e);
          const VertexId v1 = g.edge_v(e);
          auto n1 = g.neighbors_u(u1);
          auto us = g.neighbors_v(v1);
          auto es = g.edge_ids_v(v1);
          for (std::size_t j = 0; j < us.size(); ++j) {
            const VertexId u2 = us[j];
            const EdgeId e2 = es[j];
            if (u2 == u1 || blocked(e2)) continue;
            auto n2 = g.neighbors_u(u2);
            const bool scan_first = n1.size() <= n2.size();
            auto small = scan_first ? n1 : n2;
            const EdgeId small_base = g.first_edge_u(scan_first ? u1 : u2);
            const VertexId other = scan_first ? u2 : u1;
            for (std::size_t i = 0; i < small.size(); ++i) {
              const VertexId v2 = small[i];
              if (v2 == v1) continue;
              auto hit = find_edge(other, v2);
              if (!hit) continue;
              const EdgeId e3 = scan_first ? small_base + i : *hit;  // (u1, v2)
              const EdgeId e4 = scan_first ? *hit : small_base + i;  // (u2, v2)
              if (blocked(e3) || blocked(e4)) continue;
              for (EdgeId f : {e2, e3, e4}) {
                if (status[f] == kActive) state.subtract(f, 1);
              }
            }
          }
        }
      });
  out.mode = PeelMode::Edge;
  return out;
}

Decomposition peel(const BipartiteGraph& g, const ButterflyCounts& counts, PeelMode mode,
                   const PeelConfig& cfg) {
  if (mode == PeelMode::Vertex) {
    return cfg.store_wedges ? wpeel_vertices(g, counts, cfg) : peel_vertices(g, counts, cfg);
  }
  return cfg.store_wedges ? wpeel_edges(g, counts, cfg) : peel_edges(g, counts, cfg);
}

Decomposition decompose(const BipartiteGraph& g, PeelMode mode, const CountConfig& ccfg,
                        const PeelConfig& pcfg) {
  const auto counts =
      mode == PeelMode::Vertex ? count_per_vertex(g, ccfg) : count_per_edge(g, ccfg);
  return peel(g, counts, mode, pcfg);
}

}  // namespace bfly
