#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfly/counting.hpp"
#include "bfly/peeling.hpp"

namespace py = pybind11;
using namespace bfly;

namespace {

CountConfig make_count_config(const std::string& rank, const std::string& agg,
                              const std::string& butterfly_agg, bool cache_opt,
                              std::uint64_t max_wedges) {
  CountConfig c;
  c.rank = parse_rank_kind(rank);
  c.agg.method = parse_aggregation(agg);
  c.butterfly_agg = parse_butterfly_agg(butterfly_agg);
  c.cache_opt = cache_opt;
  if (max_wedges) c.agg.max_wedges_in_flight = max_wedges;
  validate(c);
  return c;
}

py::dict counts_to_dict(const BipartiteGraph& g, const ButterflyCounts& c) {
  py::dict d;
  d["total"] = c.total;
  d["wedges"] = c.stats.wedges;
  if (c.mode == CountMode::Vertex) {
    d["per_u"] = c.per_u;
    d["per_v"] = c.per_v;
  } else if (c.mode == CountMode::Edge) {
    d["per_edge"] = c.per_edge;
    std::vector<std::pair<VertexId, VertexId>> edges(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) edges[e] = {g.edge_u(e), g.edge_v(e)};
    d["edges"] = edges;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_bfly, m) {
  m.doc() = "Parallel butterfly counting and peeling on bipartite graphs";

  // Registered base first: later translators take precedence.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());

  py::class_<BipartiteGraph>(m, "Graph")
      .def_static(
          "from_edges",
          [](VertexId nu, VertexId nv, std::vector<std::pair<VertexId, VertexId>> edges) {
            return BipartiteGraph::from_edges(nu, nv, std::move(edges));
          },
          py::arg("num_u"), py::arg("num_v"), py::arg("edges"))
      .def_static(
          "load",
          [](const std::string& path, bool zero_indexed) {
            LoadOptions o;
            o.zero_indexed = zero_indexed;
            return load_graph_file(path, o);
          },
          py::arg("path"), py::arg("zero_indexed") = false)
      .def_static(
          "parse",
          [](const std::string& text, bool zero_indexed) {
            LoadOptions o;
            o.zero_indexed = zero_indexed;
            return load_edge_list_string(text, o);
          },
          py::arg("text"), py::arg("zero_indexed") = false)
      .def("save_binary", [](const BipartiteGraph& g, const std::string& p) { save_binary_file(g, p); })
      .def_property_readonly("num_u", &BipartiteGraph::num_u)
      .def_property_readonly("num_v", &BipartiteGraph::num_v)
      .def_property_readonly("num_edges", &BipartiteGraph::num_edges)
      .def("edges",
           [](const BipartiteGraph& g) {
             std::vector<std::pair<VertexId, VertexId>> out(g.num_edges());
             for (EdgeId e = 0; e < g.num_edges(); ++e) out[e] = {g.edge_u(e), g.edge_v(e)};
             return out;
           })
      .def("__eq__", [](const BipartiteGraph& a, const BipartiteGraph& b) { return a == b; })
      .def("__repr__", [](const BipartiteGraph& g) {
        return "<Graph nU=" + std::to_string(g.num_u()) + " nV=" + std::to_string(g.num_v()) +
               " m=" + std::to_string(g.num_edges()) + ">";
      });

  m.def(
      "count",
      [](const BipartiteGraph& g, const std::string& mode, const std::string& rank,
         const std::string& agg, const std::string& butterfly_agg, bool cache_opt,
         std::uint64_t max_wedges) {
        const auto cfg = make_count_config(rank, agg, butterfly_agg, cache_opt, max_wedges);
        const auto md = parse_count_mode(mode);
        ButterflyCounts c;
        {
          py::gil_scoped_release release;
          c = count_butterflies(g, md, cfg);
        }
        return counts_to_dict(g, c);
      },
      py::arg("graph"), py::arg("mode") = "total", py::arg("rank") = "adegree",
      py::arg("agg") = "batchs", py::arg("butterfly_agg") = "atomic", py::arg("cache_opt") = false,
      py::arg("max_wedges") = 0);

  m.def(
      "approx_count",
      [](const BipartiteGraph& g, const std::string& method, double p, std::uint64_t seed) {
        SparsifyConfig s{parse_sparsify_method(method), p, seed};
        validate(s);
        ApproxCount a;
        {
          py::gil_scoped_release release;
          a = approx_count_total(g, s, {});
        }
        return py::make_tuple(a.sampled, a.estimate);
      },
      py::arg("graph"), py::arg("method") = "edge", py::arg("p") = 1.0, py::arg("seed") = 0);

  m.def(
      "peel",
      [](const BipartiteGraph& g, const std::string& mode, const std::string& buckets,
         bool store_wedges, const std::string& rank, const std::string& agg,
         std::uint64_t max_wedges) {
        const auto ccfg = make_count_config(rank, agg, "atomic", false, max_wedges);
        PeelConfig p;
        p.agg = ccfg.agg;
        p.rank = ccfg.rank;
        p.buckets = parse_bucket_backend(buckets);
        p.store_wedges = store_wedges;
        const auto md = parse_peel_mode(mode);
        Decomposition d;
        {
          py::gil_scoped_release release;
          d = decompose(g, md, ccfg, p);
        }
        py::dict out;
        out["numbers"] = d.number;
        out["rounds"] = d.rounds;
        out["max_b"] = d.max_b;
        if (md == PeelMode::Vertex) out["peel_side"] = std::string(side_name(d.peel_side));
        return out;
      },
      py::arg("graph"), py::arg("mode") = "vertex", py::arg("buckets") = "dense",
      py::arg("store_wedges") = false, py::arg("rank") = "adegree", py::arg("agg") = "batchs",
      py::arg("max_wedges") = 0);

  m.def(
      "brute_force",
      [](const BipartiteGraph& g) {
        const auto o = brute_force_butterflies(g);
        py::dict d;
        d["total"] = o.total;
        d["per_u"] = o.per_u;
        d["per_v"] = o.per_v;
        d["per_edge"] = o.per_edge;
        return d;
      },
      py::arg("graph"));
}
