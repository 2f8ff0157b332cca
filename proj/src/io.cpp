#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "bfly/graph.hpp"

namespace bfly {
namespace {

constexpr std::array<char, 8> kMagic = {'B', 'F', 'L', 'Y', 'C', 'S', 'R', '\0'};
constexpr std::uint64_t kVersion = 1;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  std::size_t j = i;
  while (j < rest.size() && !is_space(rest[j])) ++j;
  auto tok = rest.substr(i, j - i);
  rest.remove_prefix(j);
  return tok;
}

std::uint64_t parse_id(std::string_view tok, std::size_t line, bool zero_indexed) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line, "vertex id overflows 64 bits: '" + std::string(tok) + "'");
  }
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected integer vertex id, got '" + std::string(tok) + "'");
  }
  if (!zero_indexed && value == 0) {
    throw ParseError(line, "vertex id 0 in 1-indexed input (use zero-indexed mode)");
  }
  return value;
}

class Compactor {
 public:
  VertexId intern(std::uint64_t label, std::size_t line) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<VertexId>(labels_.size()));
    if (inserted) {
      if (labels_.size() >= kNoVertex) throw ParseError(line, "too many vertices");
      labels_.push_back(label);
    }
    return it->second;
  }
  std::vector<std::uint64_t> take_labels() { return std::move(labels_); }
  VertexId size() const { return static_cast<VertexId>(labels_.size()); }

 private:
  std::unordered_map<std::uint64_t, VertexId> ids_;
  std::vector<std::uint64_t> labels_;
};

template <class T>
void write_u64(std::ostream& out, T value) {
  std::uint64_t v = static_cast<std::uint64_t>(value);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw Error("truncated binary graph");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

template <class T>
std::vector<T> read_array(std::istream& in, std::uint64_t n) {
  std::vector<T> out;
  out.reserve(std::min<std::uint64_t>(n, std::uint64_t{1} << 20));  // n is untrusted
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(static_cast<T>(read_u64(in)));
  return out;
}

template <class Range>
void write_array(std::ostream& out, const Range& r) {
  for (auto x : r) write_u64(out, x);
}

}  // namespace

BipartiteGraph load_edge_list(std::istream& in, const LoadOptions& opts) {
  Compactor us;
  Compactor vs;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
    if (rest.empty()) continue;
    if (rest.front() == '%' || rest.front() == '#') {
      if (opts.allow_comments) continue;
      throw ParseError(lineno, "comment line not allowed");
    }
    auto a = next_token(rest);
    auto b = next_token(rest);
    if (b.empty()) throw ParseError(lineno, "expected two vertex ids");
    const auto u = us.intern(parse_id(a, lineno, opts.zero_indexed), lineno);
    const auto v = vs.intern(parse_id(b, lineno, opts.zero_indexed), lineno);
    edges.emplace_back(u, v);
  }
  const VertexId nu = us.size();
  const VertexId nv = vs.size();
  return BipartiteGraph::from_edges(nu, nv, std::move(edges), us.take_labels(), vs.take_labels());
}

BipartiteGraph load_edge_list_string(const std::string& text, const LoadOptions& opts) {
  std::istringstream in(text);
  return load_edge_list(in, opts);
}

void save_binary(const BipartiteGraph& g, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, kVersion);
  write_u64(out, g.num_u());
  write_u64(out, g.num_v());
  write_u64(out, g.num_edges());
  write_array(out, g.offsets_u());
  write_array(out, g.adjacency_u());
  // V-side CSR, regenerated on load but stored for external readers.
  EdgeId off = 0;
  write_u64(out, 0);
  for (VertexId v = 0; v < g.num_v(); ++v) {
    off += g.degree_v(v);
    write_u64(out, off);
  }
  for (VertexId v = 0; v < g.num_v(); ++v) write_array(out, g.neighbors_v(v));
  for (VertexId u = 0; u < g.num_u(); ++u) write_u64(out, g.label_u(u));
  for (VertexId v = 0; v < g.num_v(); ++v) write_u64(out, g.label_v(v));
  if (!out) throw Error("failed writing binary graph");
}

BipartiteGraph load_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error("not a binary graph file (bad magic)");
  }
  const auto version = read_u64(in);
  if (version != kVersion) throw Error("unsupported binary graph version " + std::to_string(version));
  const auto nu = read_u64(in);
  const auto nv = read_u64(in);
  const auto m = read_u64(in);
  if (nu >= kNoVertex || nv >= kNoVertex) throw Error("binary graph too large");
  auto offsets_u = read_array<EdgeId>(in, nu + 1);
  auto adj_u = read_array<VertexId>(in, m);
  auto offsets_v = read_array<EdgeId>(in, nv + 1);
  auto adj_v = read_array<VertexId>(in, m);
  auto labels_u = read_array<std::uint64_t>(in, nu);
  auto labels_v = read_array<std::uint64_t>(in, nv);
  auto g = BipartiteGraph::from_csr(static_cast<VertexId>(nu), static_cast<VertexId>(nv),
                                    std::move(offsets_u), std::move(adj_u), std::move(labels_u),
                                    std::move(labels_v));
  if (offsets_v.front() != 0 || offsets_v.back() != m ||
      !std::is_sorted(offsets_v.begin(), offsets_v.end())) {
    throw Error("binary graph V-side offsets are malformed");
  }
  for (VertexId v = 0; v < g.num_v(); ++v) {
    auto nb = g.neighbors_v(v);
    if (offsets_v[v + 1] - offsets_v[v] != nb.size() ||
        !std::equal(nb.begin(), nb.end(), adj_v.begin() + static_cast<std::ptrdiff_t>(offsets_v[v]))) {
      throw Error("binary graph V-side CSR inconsistent with U side");
    }
  }
  return g;
}

BipartiteGraph load_graph_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 8 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? load_binary(in) : load_edge_list(in, opts);
}

void save_binary_file(const BipartiteGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_binary(g, out);
}

}  // namespace bfly
