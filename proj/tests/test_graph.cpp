#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "bfly/graph.hpp"
#include "test_support.hpp"

using namespace bfly;
using bfly::testing::complete_bipartite;
using bfly::testing::figure1;
using bfly::testing::random_bipartite;

namespace {

void expect_consistent(const BipartiteGraph& g) {
  std::size_t sum_u = 0, sum_v = 0;
  for (VertexId u = 0; u < g.num_u(); ++u) {
    sum_u += g.degree_u(u);
    for (VertexId v : g.neighbors_u(u)) {
      ASSERT_LT(v, g.num_v());
      auto nv = g.neighbors_v(v);
      EXPECT_TRUE(std::binary_search(nv.begin(), nv.end(), u));
    }
  }
  for (VertexId v = 0; v < g.num_v(); ++v) {
    sum_v += g.degree_v(v);
    auto ids = g.edge_ids_v(v);
    auto nb = g.neighbors_v(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_EQ(g.edge_u(ids[i]), nb[i]);
      EXPECT_EQ(g.edge_v(ids[i]), v);
    }
  }
  EXPECT_EQ(sum_u, g.num_edges());
  EXPECT_EQ(sum_v, g.num_edges());
}

}  // namespace

TEST(LoadEdgeList, SmallestButterfly) {
  auto g = load_edge_list_string("1 1\n1 2\n2 1\n2 2\n");
  EXPECT_EQ(g.num_u(), 2u);
  EXPECT_EQ(g.num_v(), 2u);
  EXPECT_EQ(g.num_edges(), 4u);
  expect_consistent(g);
}

TEST(LoadEdgeList, FigureOneFile) {
  auto g = load_graph_file(std::string(BFLY_TEST_DATA) + "/fig1.txt");
  EXPECT_EQ(g.num_u(), 3u);
  EXPECT_EQ(g.num_v(), 3u);
  EXPECT_EQ(g.num_edges(), 7u);
  EXPECT_EQ(g, figure1());
}

TEST(LoadEdgeList, DuplicatesCollapse) {
  auto g = load_edge_list_string("1 2\n1 2\n");
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(LoadEdgeList, CommentsSeparatorsAndExtraColumns) {
  auto g = load_edge_list_string("% header\n# more\n\n1\t2 1 1700000000\n3,2\r\n");
  EXPECT_EQ(g.num_u(), 2u);
  EXPECT_EQ(g.num_v(), 1u);
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(LoadEdgeList, CompactsInFirstAppearanceOrder) {
  auto g = load_edge_list_string("50 9\n30 7\n50 7\n");
  EXPECT_EQ(g.label_u(0), 50u);
  EXPECT_EQ(g.label_u(1), 30u);
  EXPECT_EQ(g.label_v(0), 9u);
  EXPECT_EQ(g.label_v(1), 7u);
  EXPECT_TRUE(g.find_edge(0, 1).has_value());
  EXPECT_FALSE(g.find_edge(1, 0).has_value());
}

TEST(LoadEdgeList, MalformedLineReportsLineNumber) {
  try {
    load_edge_list_string("1 2\n3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_edge_list_string("1 x\n"), ParseError);
}

TEST(LoadEdgeList, TokenOverflow) {
  EXPECT_THROW(load_edge_list_string("1 99999999999999999999999\n"), ParseError);
}

TEST(LoadEdgeList, ZeroIndexing) {
  EXPECT_THROW(load_edge_list_string("0 1\n"), ParseError);
  LoadOptions o;
  o.zero_indexed = true;
  auto g = load_edge_list_string("0 0\n0 1\n", o);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.label_u(0), 0u);
}

TEST(BinaryFormat, RoundTrip) {
  auto g = load_edge_list_string("5 9\n3 9\n3 1\n7 1\n");
  std::stringstream buf;
  save_binary(g, buf);
  auto h = load_binary(buf);
  EXPECT_EQ(g, h);
  EXPECT_EQ(h.label_u(0), 5u);
}

TEST(BinaryFormat, FileDetectionAndCorruption) {
  auto path = std::filesystem::temp_directory_path() / "bfly_graph_test.bin";
  auto g = random_bipartite(20, 15, 0.3, 4);
  save_binary_file(g, path.string());
  EXPECT_EQ(load_graph_file(path.string()), g);

  std::stringstream bad("NOTAGRAPH-------");
  EXPECT_THROW(load_binary(bad), Error);
  std::stringstream full;
  save_binary(g, full);
  std::string bytes = full.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_binary(truncated), Error);
  std::filesystem::remove(path);
}

TEST(BipartiteGraph, FromEdgesValidates) {
  EXPECT_THROW(BipartiteGraph::from_edges(1, 1, {{0, 1}}), Error);
  auto g = BipartiteGraph::from_edges(2, 3, {{1, 2}, {0, 0}, {1, 2}});
  EXPECT_EQ(g.num_edges(), 2u);
  expect_consistent(g);
}

TEST(BipartiteGraph, RandomGraphsAreConsistent) {
  for (std::uint64_t s = 0; s < 20; ++s) expect_consistent(random_bipartite(17, 23, 0.25, s));
}

TEST(Oracle, FigureOne) {
  auto o = brute_force_butterflies(figure1());
  EXPECT_EQ(o.total, 3u);
  EXPECT_EQ(o.per_u, (std::vector<Count>{3, 3, 0}));
  EXPECT_EQ(o.per_v, (std::vector<Count>{2, 2, 2}));
  EXPECT_EQ(o.per_edge, (std::vector<Count>{2, 2, 2, 2, 2, 2, 0}));
}

TEST(Oracle, CompleteBipartite) {
  auto o = brute_force_butterflies(complete_bipartite(2, 2));
  EXPECT_EQ(o.total, 1u);
  EXPECT_EQ(o.per_edge, (std::vector<Count>(4, 1)));
  for (VertexId a = 1; a <= 6; ++a) {
    for (VertexId b = 1; b <= 6; ++b) {
      EXPECT_EQ(brute_force_butterflies(complete_bipartite(a, b)).total, choose2(a) * choose2(b));
    }
  }
}

TEST(Oracle, FourPerButterflyIdentities) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto o = brute_force_butterflies(random_bipartite(25, 30, 0.3, s));
    const Count vsum = std::accumulate(o.per_u.begin(), o.per_u.end(), Count{0}) +
                       std::accumulate(o.per_v.begin(), o.per_v.end(), Count{0});
    const Count esum = std::accumulate(o.per_edge.begin(), o.per_edge.end(), Count{0});
    EXPECT_EQ(vsum, 4 * o.total);
    EXPECT_EQ(esum, 4 * o.total);
  }
}

TEST(FewestWedgeSide, Examples) {
  // Figure 1: U endpoints give 5 wedges, V endpoints 6.
  EXPECT_EQ(fewest_wedge_endpoint_side(figure1()), Side::U);
  // K(1,5): U endpoints give no wedges.
  EXPECT_EQ(fewest_wedge_endpoint_side(complete_bipartite(1, 5)), Side::U);
  EXPECT_EQ(fewest_wedge_endpoint_side(complete_bipartite(5, 1)), Side::V);
  // Tie goes to U.
  EXPECT_EQ(fewest_wedge_endpoint_side(complete_bipartite(3, 3)), Side::U);
}
