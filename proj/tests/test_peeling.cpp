#include <gtest/gtest.h>

#include "bfly/counting.hpp"
#include "bfly/peeling.hpp"
#include "test_support.hpp"

using namespace bfly;
using bfly::testing::complete_bipartite;
using bfly::testing::figure1;
using bfly::testing::random_bipartite;
using bfly::testing::sequential_tip_numbers;
using bfly::testing::sequential_wing_numbers;

namespace {

struct Variant {
  PeelMode mode;
  bool store;
  BucketBackend buckets;
};

std::vector<Variant> variants() {
  std::vector<Variant> out;
  for (auto m : {PeelMode::Vertex, PeelMode::Edge}) {
    for (bool s : {false, true}) {
      for (auto b : {BucketBackend::Dense, BucketBackend::Fib}) out.push_back({m, s, b});
    }
  }
  return out;
}

Decomposition run(const BipartiteGraph& g, const Variant& v) {
  PeelConfig p;
  p.store_wedges = v.store;
  p.buckets = v.buckets;
  return decompose(g, v.mode, {}, p);
}

std::string describe(const Variant& v) {
  return std::string(peel_mode_name(v.mode)) + (v.store ? "/stored" : "") + "/" +
         std::string(bucket_backend_name(v.buckets));
}

}  // namespace

TEST(Peeling, FigureOne) {
  auto g = figure1();
  for (const auto& v : variants()) {
    auto d = run(g, v);
    if (v.mode == PeelMode::Vertex) {
      EXPECT_EQ(d.peel_side, Side::U);
      EXPECT_EQ(d.number, (std::vector<Count>{3, 3, 0})) << describe(v);
      EXPECT_EQ(d.max_b, 3u);
    } else {
      EXPECT_EQ(d.number, (std::vector<Count>{2, 2, 2, 2, 2, 2, 0})) << describe(v);
      EXPECT_EQ(d.max_b, 2u);
    }
    EXPECT_EQ(d.rounds, 2u) << describe(v);
  }
}

TEST(Peeling, CompleteBipartiteAndTree) {
  auto k22 = complete_bipartite(2, 2);
  auto tree = BipartiteGraph::from_edges(2, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  for (const auto& v : variants()) {
    auto d = run(k22, v);
    EXPECT_EQ(d.number, std::vector<Count>(v.mode == PeelMode::Vertex ? 2 : 4, 1)) << describe(v);
    EXPECT_EQ(d.rounds, 1u);
    auto t = run(tree, v);
    for (Count n : t.number) EXPECT_EQ(n, 0u);
    EXPECT_EQ(t.rounds, 1u);
  }
}

TEST(Peeling, MatchesSequentialOracle) {
  for (std::size_t i = 0; i < 25; ++i) {
    auto g = bfly::testing::suite_graph(i, 30);
    const auto tips = sequential_tip_numbers(g, vertex_peel_side(g));
    const auto wings = sequential_wing_numbers(g);
    for (const auto& v : variants()) {
      auto d = run(g, v);
      EXPECT_EQ(d.number, v.mode == PeelMode::Vertex ? tips : wings) << describe(v) << " graph " << i;
      for (std::size_t r = 1; r < d.round_keys.size(); ++r) {
        EXPECT_LE(d.round_keys[r - 1], d.round_keys[r]);
      }
      EXPECT_EQ(d.round_keys.size(), d.rounds);
    }
  }
}

TEST(Peeling, VariantsAgreeExactly) {
  auto g = random_bipartite(40, 35, 0.2, 8);
  for (auto m : {PeelMode::Vertex, PeelMode::Edge}) {
    const auto ref = run(g, {m, false, BucketBackend::Dense});
    for (const auto& v : variants()) {
      if (v.mode == m) EXPECT_EQ(run(g, v), ref) << describe(v);
    }
  }
}

TEST(Peeling, CountModeMustMatch) {
  auto g = figure1();
  auto counts = count_butterflies(g, CountMode::Edge, {});
  EXPECT_THROW(peel_vertices(g, counts, {}), ContractError);
  auto vcounts = count_butterflies(g, CountMode::Vertex, {});
  EXPECT_THROW(peel_edges(g, vcounts, {}), ContractError);
}

TEST(Peeling, StoredWedgeCap) {
  auto g = complete_bipartite(6, 6);
  PeelConfig p;
  p.store_wedges = true;
  p.wedge_cap = 3;
  EXPECT_THROW(decompose(g, PeelMode::Vertex, {}, p), ResourceError);
  EXPECT_THROW(decompose(g, PeelMode::Edge, {}, p), ResourceError);
}
