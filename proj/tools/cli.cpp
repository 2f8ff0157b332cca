#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfly/counting.hpp"
#include "bfly/parallel.hpp"
#include "bfly/peeling.hpp"

namespace bfly::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string out_path;
  std::string format = "tsv";
  int threads = 0;
  bool zero_indexed = false;
  bool omit_timing = false;

  std::string mode;
  std::string rank = "adegree";
  std::string agg = "batchs";
  std::string butterfly_agg = "atomic";
  std::uint64_t max_wedges = kDefaultMaxWedgesInFlight;
  bool cache_opt = false;

  std::string sparsify;
  double p = 1.0;
  std::uint64_t seed = 0;

  std::string buckets = "dense";
  bool store_wedges = false;

  std::string convert_out;
  std::string to = "binary";

  std::string op = "count";
  std::vector<std::string> bench_ranks;
  std::vector<VertexId> random_spec;
  int repeat = 1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

int default_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      return 0;
    }
  }
  return 0;
}

int resolve_threads(int requested) { return requested > 0 ? requested : omp_get_num_procs(); }

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

BipartiteGraph load_input(const Options& o) {
  LoadOptions lo;
  lo.zero_indexed = o.zero_indexed;
  return load_graph_file(o.input, lo);
}

std::string vertex_name(const BipartiteGraph& g, Side s, VertexId x) {
  return side_name(s) + std::to_string(g.label(s, x));
}

std::string edge_name(const BipartiteGraph& g, EdgeId e) {
  return vertex_name(g, Side::U, g.edge_u(e)) + "-" + vertex_name(g, Side::V, g.edge_v(e));
}

RankKind resolve_rank(const BipartiteGraph& g, const std::string& name) {
  if (name == "auto") return choose_ranking_auto(g);
  return parse_rank_kind(name);
}

CountConfig count_config(const Options& o, const BipartiteGraph& g) {
  CountConfig c;
  c.rank = resolve_rank(g, o.rank);
  c.agg.method = parse_aggregation(o.agg);
  c.agg.max_wedges_in_flight = o.max_wedges;
  c.butterfly_agg = parse_butterfly_agg(o.butterfly_agg);
  c.cache_opt = o.cache_opt;
  validate(c);
  return c;
}

Json config_echo(const Options& o, const CountConfig& c) {
  Json j;
  j["input"] = o.input;
  j["mode"] = o.mode;
  j["ranking"] = rank_kind_name(c.rank);
  j["ranking_requested"] = o.rank;
  j["backend"] = aggregation_name(c.agg.method);
  j["butterfly_agg"] = butterfly_agg_name(c.butterfly_agg);
  j["cache_opt"] = c.cache_opt;
  j["max_wedges"] = c.agg.max_wedges_in_flight;
  j["zero_indexed"] = o.zero_indexed;
  return j;
}

void add_timing(Json& j, const Options& o, double ms) {
  if (o.omit_timing) return;
  j["elapsed_ms"] = ms;
  j["threads"] = resolve_threads(o.threads);
}

// Writes to --out when given, else to out.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + o.out_path);
  f << text;
}

std::string format_estimate(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void check_format(const Options& o) {
  if (o.format != "tsv" && o.format != "json") throw UsageError("--format must be tsv or json");
}

int cmd_count(const Options& o, std::ostream& out) {
  check_format(o);
  const CountMode mode = parse_count_mode(o.mode);
  if (!o.sparsify.empty() && mode != CountMode::Total) {
    throw UsageError("--sparsify only applies to --mode total");
  }
  const BipartiteGraph g = load_input(o);
  const CountConfig cfg = count_config(o, g);

  std::ostringstream text;
  Json j;
  j["command"] = "count";
  j.update(config_echo(o, cfg));
  const auto t0 = Clock::now();
  if (!o.sparsify.empty()) {
    SparsifyConfig s;
    s.method = parse_sparsify_method(o.sparsify);
    s.p = o.p;
    s.seed = o.seed;
    validate(s);
    const auto est = approx_count_total(g, s, cfg);
    const double ms = ms_since(t0);
    if (o.format == "tsv") {
      text << format_estimate(est.estimate) << '\n';
    } else {
      j["sparsify"] = {{"method", sparsify_method_name(s.method)}, {"p", s.p}, {"seed", s.seed}};
      j["sampled_total"] = est.sampled;
      j["estimate"] = est.estimate;
      add_timing(j, o, ms);
      text << j.dump(2) << '\n';
    }
    emit(o, out, text.str());
    return kExitOk;
  }

  const ButterflyCounts c = count_butterflies(g, mode, cfg);
  const double ms = ms_since(t0);
  if (o.format == "tsv") {
    if (mode == CountMode::Total) {
      text << c.total << '\n';
    } else if (mode == CountMode::Vertex) {
      for (VertexId u = 0; u < g.num_u(); ++u) text << vertex_name(g, Side::U, u) << '\t' << c.per_u[u] << '\n';
      for (VertexId v = 0; v < g.num_v(); ++v) text << vertex_name(g, Side::V, v) << '\t' << c.per_v[v] << '\n';
    } else {
      for (EdgeId e = 0; e < g.num_edges(); ++e) text << edge_name(g, e) << '\t' << c.per_edge[e] << '\n';
    }
  } else {
    j["total"] = c.total;
    j["wedges"] = c.stats.wedges;
    if (mode == CountMode::Vertex) {
      Json counts = Json::object();
      for (VertexId u = 0; u < g.num_u(); ++u) counts[vertex_name(g, Side::U, u)] = c.per_u[u];
      for (VertexId v = 0; v < g.num_v(); ++v) counts[vertex_name(g, Side::V, v)] = c.per_v[v];
      j["counts"] = std::move(counts);
    } else if (mode == CountMode::Edge) {
      Json counts = Json::object();
      for (EdgeId e = 0; e < g.num_edges(); ++e) counts[edge_name(g, e)] = c.per_edge[e];
      j["counts"] = std::move(counts);
    }
    add_timing(j, o, ms);
    text << j.dump(2) << '\n';
  }
  emit(o, out, text.str());
  return kExitOk;
}

PeelConfig peel_config(const Options& o, const CountConfig& c) {
  PeelConfig p;
  p.agg = c.agg;
  p.buckets = parse_bucket_backend(o.buckets);
  p.store_wedges = o.store_wedges;
  p.rank = c.rank;
  p.wedge_cap = o.max_wedges;
  return p;
}

int cmd_peel(const Options& o, std::ostream& out) {
  check_format(o);
  const PeelMode mode = parse_peel_mode(o.mode);
  const BipartiteGraph g = load_input(o);
  const CountConfig cfg = count_config(o, g);
  const PeelConfig pcfg = peel_config(o, cfg);

  const auto t0 = Clock::now();
  const Decomposition d = decompose(g, mode, cfg, pcfg);
  const double ms = ms_since(t0);

  std::ostringstream text;
  auto name_of = [&](std::size_t i) {
    return mode == PeelMode::Vertex ? vertex_name(g, d.peel_side, static_cast<VertexId>(i))
                                    : edge_name(g, i);
  };
  if (o.format == "tsv") {
    for (std::size_t i = 0; i < d.number.size(); ++i) text << name_of(i) << '\t' << d.number[i] << '\n';
  } else {
    Json j;
    j["command"] = "peel";
    j.update(config_echo(o, cfg));
    j["buckets"] = bucket_backend_name(pcfg.buckets);
    j["store_wedges"] = pcfg.store_wedges;
    if (mode == PeelMode::Vertex) j["peel_side"] = side_name(d.peel_side);
    j["rounds"] = d.rounds;
    j["max_b"] = d.max_b;
    Json numbers = Json::object();
    for (std::size_t i = 0; i < d.number.size(); ++i) numbers[name_of(i)] = d.number[i];
    j["numbers"] = std::move(numbers);
    add_timing(j, o, ms);
    text << j.dump(2) << '\n';
  }
  emit(o, out, text.str());
  return kExitOk;
}

int cmd_convert(const Options& o, std::ostream& out) {
  const BipartiteGraph g = load_input(o);
  if (o.to == "binary") {
    save_binary_file(g, o.convert_out);
  } else if (o.to == "text") {
    std::ofstream f(o.convert_out, std::ios::binary);
    if (!f) throw Error("cannot open output file " + o.convert_out);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      f << g.label_u(g.edge_u(e)) << ' ' << g.label_v(g.edge_v(e)) << '\n';
    }
  } else {
    throw UsageError("--to must be binary or text");
  }
  out << "nU=" << g.num_u() << " nV=" << g.num_v() << " m=" << g.num_edges() << '\n';
  return kExitOk;
}

// nu * deg random edges over [0,nu) x [0,nv), duplicates collapsed.
BipartiteGraph random_graph(const std::vector<VertexId>& spec, std::uint64_t seed) {
  if (spec.size() != 3 || spec[0] == 0 || spec[1] == 0) {
    throw UsageError("--random expects NU,NV,DEG with positive sides");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pu(0, spec[0] - 1), pv(0, spec[1] - 1);
  std::vector<std::pair<VertexId, VertexId>> edges(std::size_t{spec[0]} * spec[2]);
  for (auto& e : edges) e = {pu(rng), pv(rng)};
  return BipartiteGraph::from_edges(spec[0], spec[1], std::move(edges));
}

int cmd_bench(const Options& o, std::ostream& out) {
  if (o.op != "count" && o.op != "peel") throw UsageError("--op must be count or peel");
  if (o.input.empty() == o.random_spec.empty()) {
    throw UsageError("bench needs exactly one of an input file or --random");
  }
  const BipartiteGraph g = o.random_spec.empty() ? load_input(o) : random_graph(o.random_spec, o.seed);
  const std::string mode = o.mode.empty() ? (o.op == "count" ? "total" : "vertex") : o.mode;
  const int max_threads = resolve_threads(o.threads);
  std::vector<int> counts;
  for (int t = 1; t < max_threads; t *= 2) counts.push_back(t);
  counts.push_back(max_threads);

  std::ostringstream text;
  text << "op,mode,rank,agg,threads,wall_ms,speedup,wedges,f\n";
  const std::vector<std::string> ranks = o.bench_ranks.empty() ? std::vector<std::string>{o.rank}
                                                                : o.bench_ranks;
  for (const auto& rank_name : ranks) {
    Options ro = o;
    ro.rank = rank_name;
    const CountConfig cfg = count_config(ro, g);
    const double f = wedge_metric_f(g, make_ranking(g, cfg.rank));
    double base_ms = 0.0;
    for (int t : counts) {
      ScopedWorkers workers(t);
      double best = -1.0;
      Count wedges = 0;
      for (int r = 0; r < std::max(1, o.repeat); ++r) {
        const auto t0 = Clock::now();
        if (o.op == "count") {
          const auto c = count_butterflies(g, parse_count_mode(mode), cfg);
          wedges = c.stats.wedges;
        } else {
          const PeelMode pm = parse_peel_mode(mode);
          const auto c = pm == PeelMode::Vertex ? count_per_vertex(g, cfg) : count_per_edge(g, cfg);
          wedges = c.stats.wedges;
          peel(g, c, pm, peel_config(ro, cfg));
        }
        const double ms = ms_since(t0);
        if (best < 0 || ms < best) best = ms;
      }
      if (t == counts.front()) base_ms = best;
      const double speedup = best > 0.0 ? base_ms / best : 1.0;
      text << o.op << ',' << mode << ',' << rank_kind_name(cfg.rank) << ','
           << aggregation_name(cfg.agg.method) << ',' << t << ',' << std::fixed
           << std::setprecision(3) << best << ',' << speedup << ',' << wedges << ','
           << std::setprecision(6) << f << std::defaultfloat << '\n';
    }
  }
  emit(o, out, text.str());
  return kExitOk;
}

void add_input_options(CLI::App* sub, Options& o) {
  sub->add_option("input", o.input, "Edge list or binary graph file")->required();
  sub->add_flag("--zero-indexed", o.zero_indexed, "Input ids start at 0");
  sub->add_option("--threads", o.threads, "Worker count (0 = all cores)");
}

void add_count_options(CLI::App* sub, Options& o) {
  sub->add_option("--rank", o.rank, "side|degree|adegree|codegen|acodegen|auto");
  sub->add_option("--agg", o.agg, "sort|hash|hist|batchs|batchwa");
  sub->add_option("--butterfly-agg", o.butterfly_agg, "atomic|reagg");
  sub->add_option("--max-wedges", o.max_wedges, "Wedges processed at once");
  sub->add_flag("--cache-opt", o.cache_opt, "Retrieve wedges from the higher endpoint");
}

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "tsv|json");
  sub->add_option("--out", o.out_path, "Output file (default stdout)");
  sub->add_flag("--omit-timing", o.omit_timing, "Drop elapsed_ms and threads from JSON");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  o.threads = default_threads();
  CLI::App app{"Butterfly counting and peeling for bipartite graphs", "bfly"};
  app.require_subcommand(1);

  auto* count = app.add_subcommand("count", "Count butterflies");
  add_input_options(count, o);
  add_count_options(count, o);
  add_output_options(count, o);
  count->add_option("--mode", o.mode, "total|vertex|edge");
  count->add_option("--sparsify", o.sparsify, "edge|color (total counts only)");
  auto* p_opt = count->add_option("--p", o.p, "Sparsification probability in (0,1]");
  count->add_option("--seed", o.seed, "Sparsification seed");

  auto* peel = app.add_subcommand("peel", "Tip or wing decomposition");
  add_input_options(peel, o);
  add_count_options(peel, o);
  add_output_options(peel, o);
  peel->add_option("--mode", o.mode, "vertex|edge");
  peel->add_option("--buckets", o.buckets, "dense|fib");
  peel->add_flag("--store-wedges", o.store_wedges, "Use the wedge-storing peeling variant");

  auto* convert = app.add_subcommand("convert", "Convert an edge list to the binary format");
  add_input_options(convert, o);
  convert->add_option("output", o.convert_out, "Output path")->required();
  convert->add_option("--to", o.to, "binary|text");

  auto* bench = app.add_subcommand("bench", "Self-relative speedup sweep, CSV output");
  bench->add_option("input", o.input, "Edge list or binary graph file");
  bench->add_flag("--zero-indexed", o.zero_indexed, "Input ids start at 0");
  bench->add_option("--threads", o.threads, "Largest worker count (0 = all cores)");
  bench->add_option("--agg", o.agg, "sort|hash|hist|batchs|batchwa");
  bench->add_option("--butterfly-agg", o.butterfly_agg, "atomic|reagg");
  bench->add_option("--max-wedges", o.max_wedges, "Wedges processed at once");
  bench->add_flag("--cache-opt", o.cache_opt, "Retrieve wedges from the higher endpoint");
  bench->add_option("--rank", o.bench_ranks, "Comma-separated rankings")->delimiter(',');
  bench->add_option("--op", o.op, "count|peel");
  bench->add_option("--mode", o.mode, "count: total|vertex|edge; peel: vertex|edge");
  bench->add_option("--buckets", o.buckets, "dense|fib");
  bench->add_flag("--store-wedges", o.store_wedges, "Peel with stored wedges");
  bench->add_option("--random", o.random_spec, "Random graph NU,NV,DEG instead of a file")
      ->delimiter(',');
  bench->add_option("--seed", o.seed, "Random graph seed");
  bench->add_option("--repeat", o.repeat, "Runs per point; the fastest is kept");
  bench->add_option("--out", o.out_path, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (p_opt->count() > 0 && o.sparsify.empty()) throw UsageError("--p requires --sparsify");
    ScopedWorkers workers(resolve_threads(o.threads));
    if (count->parsed()) {
      if (o.mode.empty()) o.mode = "total";
      return cmd_count(o, out);
    }
    if (peel->parsed()) {
      if (o.mode.empty()) o.mode = "vertex";
      return cmd_peel(o, out);
    }
    if (convert->parsed()) return cmd_convert(o, out);
    return cmd_bench(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace bfly::cli
