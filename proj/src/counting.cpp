#include "bfly/counting.hpp"

#include <cmath>
#include <string>

#include "bfly/parallel.hpp"

namespace bfly {

std::string_view count_mode_name(CountMode m) {
  switch (m) {
    case CountMode::Total: return "total";
    case CountMode::Vertex: return "vertex";
    case CountMode::Edge: return "edge";
  }
  return "?";
}

CountMode parse_count_mode(std::string_view name) {
  for (auto m : {CountMode::Total, CountMode::Vertex, CountMode::Edge}) {
    if (count_mode_name(m) == name) return m;
  }
  throw ConfigError("unknown count mode '" + std::string(name) + "'");
}

std::string_view butterfly_agg_name(ButterflyAgg a) {
  return a == ButterflyAgg::Atomic ? "atomic" : "reagg";
}

ButterflyAgg parse_butterfly_agg(std::string_view name) {
  if (name == "atomic") return ButterflyAgg::Atomic;
  if (name == "reagg") return ButterflyAgg::Reagg;
  throw ConfigError("unknown butterfly aggregation '" + std::string(name) + "'");
}

void validate(const CountConfig& cfg) {
  if (cfg.agg.max_wedges_in_flight == 0) throw ConfigError("--max-wedges must be positive");
  if (cfg.butterfly_agg == ButterflyAgg::Reagg && is_batching(cfg.agg.method)) {
    throw ConfigError("reagg butterfly aggregation needs a sort, hash or hist backend");
  }
}

namespace {

// Cache-line padded per-worker accumulator.
struct alignas(64) PaddedCount {
  Count value = 0;
};

// Collects (element, delta) pairs per worker for re-aggregation, or adds
// directly with atomics.
class Accumulator {
 public:
  Accumulator(std::size_t size, const CountConfig& cfg)
      : values_(size, 0), reagg_(cfg.butterfly_agg == ButterflyAgg::Reagg), method_(cfg.agg.method) {
    if (reagg_) pending_.resize(static_cast<std::size_t>(num_workers()));
  }

  void add(std::size_t index, Count delta) {
    if (delta == 0) return;
    if (reagg_) {
      pending_[static_cast<std::size_t>(worker_id())].push_back({index, delta});
    } else {
      atomic_add(values_[index], delta);
    }
  }

  std::vector<Count> finish() {
    if (reagg_) {
      std::vector<KeyCount> all;
      for (auto& p : pending_) {
        all.insert(all.end(), p.begin(), p.end());
        p = {};
      }
      for (const auto& kc : aggregate_sum(std::move(all), method_)) values_[kc.key] += kc.count;
    }
    return std::move(values_);
  }

 private:
  std::vector<Count> values_;
  bool reagg_;
  AggregationMethod method_;
  std::vector<std::vector<KeyCount>> pending_;
};

Count sum_of(const std::vector<PaddedCount>& parts) {
  Count t = 0;
  for (const auto& p : parts) t = checked_add(t, p.value);
  return t;
}

}  // namespace

Count count_total(const RankedGraph& rg, const CountConfig& cfg, EngineStats* stats) {
  validate(cfg);
  std::vector<PaddedCount> parts(static_cast<std::size_t>(num_workers()));
  AggregationWorkspace ws;
  auto st = aggregate_anchored(
      RankedWedgeSource(rg, cfg.cache_opt), cfg.agg, rg.num_vertices(), ws,
      [&](VertexId, VertexId, Count d) {
        auto& p = parts[static_cast<std::size_t>(worker_id())].value;
        p = checked_add(p, choose2(d));
      },
      NoWedgePass{});
  if (stats) *stats = st;
  return sum_of(parts);
}

Count count_total(const BipartiteGraph& g, const CountConfig& cfg, EngineStats* stats) {
  validate(cfg);
  return count_total(preprocess(g, make_ranking(g, cfg.rank)), cfg, stats);
}

ButterflyCounts count_per_vertex(const BipartiteGraph& g, const RankedGraph& rg,
                                 const CountConfig& cfg) {
  validate(cfg);
  ButterflyCounts out;
  out.mode = CountMode::Vertex;
  Accumulator acc(g.num_vertices(), cfg);
  std::vector<PaddedCount> parts(static_cast<std::size_t>(num_workers()));
  AggregationWorkspace ws;
  out.stats = aggregate_anchored(
      RankedWedgeSource(rg, cfg.cache_opt), cfg.agg, rg.num_vertices(), ws,
      [&](VertexId a, VertexId o, Count d) {
        const Count b = choose2(d);
        if (b == 0) return;
        auto& p = parts[static_cast<std::size_t>(worker_id())].value;
        p = checked_add(p, b);
        acc.add(rg.original(a), b);
        acc.add(rg.original(o), b);
      },
      [&](const WedgeRef& w, Count d) { acc.add(rg.original(w.c), d - 1); });
  out.total = sum_of(parts);
  auto combined = acc.finish();
  out.per_u.resize(g.num_u());
  out.per_v.resize(g.num_v());
  for (VertexId u = 0; u < g.num_u(); ++u) out.per_u[u] = combined[g.combined(Side::U, u)];
  for (VertexId v = 0; v < g.num_v(); ++v) out.per_v[v] = combined[g.combined(Side::V, v)];
  return out;
}

ButterflyCounts count_per_edge(const BipartiteGraph& g, const RankedGraph& rg,
                               const CountConfig& cfg) {
  validate(cfg);
  ButterflyCounts out;
  out.mode = CountMode::Edge;
  Accumulator acc(g.num_edges(), cfg);
  std::vector<PaddedCount> parts(static_cast<std::size_t>(num_workers()));
  AggregationWorkspace ws;
  out.stats = aggregate_anchored(
      RankedWedgeSource(rg, cfg.cache_opt), cfg.agg, rg.num_vertices(), ws,
      [&](VertexId, VertexId, Count d) {
        auto& p = parts[static_cast<std::size_t>(worker_id())].value;
        p = checked_add(p, choose2(d));
      },
      [&](const WedgeRef& w, Count d) {
        acc.add(rg.edge_of_slot(w.slot_e1), d - 1);
        acc.add(rg.edge_of_slot(w.slot_e2), d - 1);
      });
  out.total = sum_of(parts);
  out.per_edge = acc.finish();
  return out;
}

ButterflyCounts count_per_vertex(const BipartiteGraph& g, const CountConfig& cfg) {
  validate(cfg);
  return count_per_vertex(g, preprocess(g, make_ranking(g, cfg.rank)), cfg);
}

ButterflyCounts count_per_edge(const BipartiteGraph& g, const CountConfig& cfg) {
  validate(cfg);
  return count_per_edge(g, preprocess(g, make_ranking(g, cfg.rank)), cfg);
}

ButterflyCounts count_butterflies(const BipartiteGraph& g, CountMode mode, const CountConfig& cfg) {
  switch (mode) {
    case CountMode::Vertex: return count_per_vertex(g, cfg);
    case CountMode::Edge: return count_per_edge(g, cfg);
    case CountMode::Total: break;
  }
  ButterflyCounts out;
  out.total = count_total(g, cfg, &out.stats);
  return out;
}

std::string_view sparsify_method_name(SparsifyMethod m) {
  return m == SparsifyMethod::Edge ? "edge" : "color";
}

SparsifyMethod parse_sparsify_method(std::string_view name) {
  if (name == "edge") return SparsifyMethod::Edge;
  if (name == "color" || name == "colorful") return SparsifyMethod::Color;
  throw ConfigError("unknown sparsification method '" + std::string(name) + "'");
}

void validate(const SparsifyConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ConfigError("sparsification p must be in (0, 1]");
}

std::uint64_t color_count(double p) { return static_cast<std::uint64_t>(std::ceil(1.0 / p - 1e-9)); }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kEdgeStream = 1;
constexpr std::uint64_t kUStream = 2;
constexpr std::uint64_t kVStream = 3;

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t id) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ id);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

BipartiteGraph sparsify(const BipartiteGraph& g, const SparsifyConfig& cfg) {
  validate(cfg);
  const std::uint64_t colors = color_count(cfg.p);
  auto color_of = [&](std::uint64_t stream, VertexId x) {
    return static_cast<std::uint64_t>(keyed_uniform(cfg.seed, stream, x) * static_cast<double>(colors));
  };
  auto keep = [&](VertexId u, VertexId v, EdgeId e) {
    if (cfg.method == SparsifyMethod::Edge) {
      return cfg.p >= 1.0 || keyed_uniform(cfg.seed, kEdgeStream, e) < cfg.p;
    }
    return colors == 1 || color_of(kUStream, u) == color_of(kVStream, v);
  };

  const VertexId nu = g.num_u();
  std::vector<EdgeId> offsets(std::size_t{nu} + 1, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId u = 0; u < nu; ++u) {
    auto nb = g.neighbors_u(u);
    EdgeId kept = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) kept += keep(u, nb[i], g.first_edge_u(u) + i);
    offsets[u + 1] = kept;
  }
  for (VertexId u = 0; u < nu; ++u) offsets[u + 1] += offsets[u];
  std::vector<VertexId> adj(offsets[nu]);
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId u = 0; u < nu; ++u) {
    auto nb = g.neighbors_u(u);
    EdgeId pos = offsets[u];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (keep(u, nb[i], g.first_edge_u(u) + i)) adj[pos++] = nb[i];
    }
  }
  return BipartiteGraph::from_csr(nu, g.num_v(), std::move(offsets), std::move(adj), g.labels_u(),
                                  g.labels_v());
}

double scale_estimate(Count sampled, const SparsifyConfig& cfg) {
  validate(cfg);
  const double s = static_cast<double>(sampled);
  if (cfg.method == SparsifyMethod::Edge) return s / std::pow(cfg.p, 4);
  return s * std::pow(static_cast<double>(color_count(cfg.p)), 3);
}

ApproxCount approx_count_total(const BipartiteGraph& g, const SparsifyConfig& scfg,
                               const CountConfig& cfg) {
  ApproxCount out;
  out.sampled = count_total(sparsify(g, scfg), cfg);
  out.estimate = scale_estimate(out.sampled, scfg);
  return out;
}

}  // namespace bfly
