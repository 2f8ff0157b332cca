#include <gtest/gtest.h>

#include "bfly/ranking.hpp"
#include "test_support.hpp"

using namespace bfly;
using bfly::testing::complete_bipartite;
using bfly::testing::figure1;
using bfly::testing::random_bipartite;

namespace {

constexpr RankKind kAllRanks[] = {RankKind::Side, RankKind::Degree, RankKind::ApproxDegree,
                                  RankKind::CoDegeneracy, RankKind::ApproxCoDegeneracy};

// Combined ids as readable names, e.g. "v3".
std::vector<std::string> names(const BipartiteGraph& g, const Ranking& r) {
  std::vector<std::string> out;
  for (VertexId c : r.order) {
    out.push_back(std::string(side_name(g.side_of(c))) + std::to_string(g.index_of(c) + 1));
  }
  return out;
}

BipartiteGraph path_u1_v1_u2() { return BipartiteGraph::from_edges(2, 1, {{0, 0}, {1, 0}}); }

}  // namespace

TEST(Ranking, NamesRoundTrip) {
  for (RankKind k : kAllRanks) EXPECT_EQ(parse_rank_kind(rank_kind_name(k)), k);
  EXPECT_THROW(parse_rank_kind("bogus"), ConfigError);
}

TEST(Ranking, EveryKindIsAPermutation) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = random_bipartite(30, 20, 0.2, s);
    for (RankKind k : kAllRanks) {
      auto r = make_ranking(g, k);
      EXPECT_EQ(r.size(), g.num_vertices());
      EXPECT_TRUE(r.is_permutation());
      for (VertexId i = 0; i < r.size(); ++i) EXPECT_EQ(r.order[r.rank_of[i]], i);
    }
  }
}

TEST(Ranking, FromOrderRejectsNonPermutation) {
  EXPECT_THROW(Ranking::from_order(RankKind::Side, {0, 0, 1}), ContractError);
  EXPECT_THROW(Ranking::from_order(RankKind::Side, {0, 3}), ContractError);
}

TEST(Ranking, SideOrder) {
  EXPECT_EQ(names(figure1(), rank_side(figure1())),
            (std::vector<std::string>{"u1", "u2", "u3", "v1", "v2", "v3"}));
  auto star = complete_bipartite(1, 5);
  EXPECT_EQ(names(star, rank_side(star)).front(), "u1");
  auto star2 = complete_bipartite(5, 1);
  EXPECT_EQ(names(star2, rank_side(star2)).front(), "v1");
}

TEST(Ranking, DegreeOrderMatchesWorkedExample) {
  EXPECT_EQ(names(figure1(), rank_degree(figure1())),
            (std::vector<std::string>{"v3", "u1", "u2", "v1", "v2", "u3"}));
}

TEST(Ranking, EqualDegreesKeepIdOrder) {
  auto g = complete_bipartite(3, 3);
  auto r = rank_degree(g);
  for (VertexId i = 0; i < r.size(); ++i) EXPECT_EQ(r.order[i], i);
}

TEST(Ranking, ApproxDegreeBuckets) {
  EXPECT_EQ(log_degree_bucket(8), 3);
  EXPECT_EQ(log_degree_bucket(5), 2);
  EXPECT_EQ(log_degree_bucket(4), 2);
  EXPECT_EQ(log_degree_bucket(1), 0);
  EXPECT_EQ(log_degree_bucket(0), -1);
  // U degrees 8,5,4,1 against 8 V vertices; the 5 and 4 tie and keep id order.
  std::vector<std::pair<VertexId, VertexId>> edges;
  const VertexId degs[] = {1, 4, 5, 8};
  for (VertexId u = 0; u < 4; ++u) {
    for (VertexId v = 0; v < degs[u]; ++v) edges.emplace_back(u, v);
  }
  auto g = BipartiteGraph::from_edges(4, 8, edges);
  auto r = rank_approx_degree(g);
  auto rank_u = [&](VertexId u) { return r.rank_of[g.combined(Side::U, u)]; };
  EXPECT_LT(rank_u(3), rank_u(1));
  EXPECT_LT(rank_u(1), rank_u(2));
  EXPECT_LT(rank_u(2), rank_u(0));
}

TEST(Ranking, CoDegeneracy) {
  auto star = complete_bipartite(1, 4);
  EXPECT_EQ(rank_codegeneracy(star, false).rank_of[star.combined(Side::U, 0)], 0u);

  auto k22 = complete_bipartite(2, 2);
  auto r = rank_codegeneracy(k22, false);
  for (VertexId i = 0; i < r.size(); ++i) EXPECT_EQ(r.order[i], i);

  auto path = path_u1_v1_u2();
  EXPECT_EQ(names(path, rank_codegeneracy(path, false)),
            (std::vector<std::string>{"v1", "u1", "u2"}));
  EXPECT_EQ(names(path, rank_codegeneracy(path, true)).front(), "v1");
}

TEST(Preprocess, ListsDecreaseAndDegreesMatchDefinitions) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto g = random_bipartite(25, 25, 0.3, s);
    for (RankKind k : kAllRanks) {
      auto rg = preprocess(g, make_ranking(g, k));
      for (VertexId x = 0; x < rg.num_vertices(); ++x) {
        auto nb = rg.neighbors(x);
        for (std::size_t i = 1; i < nb.size(); ++i) ASSERT_GT(nb[i - 1], nb[i]);
        std::size_t above = 0;
        for (VertexId y : nb) above += y > x;
        EXPECT_EQ(rg.self_degree(x), above);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          std::size_t cut = 0;
          for (VertexId z : rg.neighbors(nb[i])) cut += z > x;
          EXPECT_EQ(rg.cut_degree(rg.slot_begin(x) + i), cut);
          const EdgeId e = rg.edge_of_slot(rg.slot_begin(x) + i);
          const VertexId a = rg.original(x), b = rg.original(nb[i]);
          const VertexId u = g.side_of(a) == Side::U ? g.index_of(a) : g.index_of(b);
          const VertexId v = g.side_of(a) == Side::U ? g.index_of(b) : g.index_of(a);
          EXPECT_EQ(g.edge_u(e), u);
          EXPECT_EQ(g.edge_v(e), v);
        }
        EXPECT_EQ(rg.side(x), g.side_of(rg.original(x)));
      }
    }
  }
}

TEST(Preprocess, CompleteBipartiteSideOrder) {
  auto g = complete_bipartite(2, 2);
  auto rg = preprocess(g, rank_side(g));
  for (VertexId x = 0; x < rg.num_vertices(); ++x) {
    EXPECT_EQ(rg.self_degree(x), rg.side(x) == Side::U ? 2u : 0u);
  }
}

TEST(Preprocess, RejectsForeignRanking) {
  auto g = complete_bipartite(2, 2);
  auto r = rank_side(complete_bipartite(3, 2));
  EXPECT_THROW(preprocess(g, r), ContractError);
}

TEST(CountPrefixGreater, Boundaries) {
  const std::vector<VertexId> list{9, 7, 7, 4, 2, 0};
  EXPECT_EQ(count_prefix_greater(list, 10), 0u);
  EXPECT_EQ(count_prefix_greater(list, 8), 1u);
  EXPECT_EQ(count_prefix_greater(list, 6), 3u);
  EXPECT_EQ(count_prefix_greater(list, 0), 5u);
  EXPECT_EQ(count_prefix_greater(std::vector<VertexId>{}, 3), 0u);
  const std::vector<VertexId> all{5, 4, 3};
  EXPECT_EQ(count_prefix_greater(all, 1), 3u);
}

TEST(WedgeMetric, Examples) {
  auto g = figure1();
  EXPECT_EQ(wedge_metric_f(g, rank_side(g)), 0.0);
  auto m = wedge_metric(g, rank_degree(g));
  EXPECT_EQ(m.side_wedges, 5u);
  EXPECT_EQ(m.ranked_wedges, 6u);
  EXPECT_DOUBLE_EQ(m.f, -0.2);
  // No wedges at all: f defined as 0.
  auto matching = BipartiteGraph::from_edges(2, 2, {{0, 0}, {1, 1}});
  EXPECT_EQ(wedge_metric_f(matching, rank_degree(matching)), 0.0);
}

TEST(WedgeMetric, AutoRule) {
  // Figure 1 gains nothing from degree order, so side order wins.
  EXPECT_EQ(choose_ranking_auto(figure1()), RankKind::Side);
  // A graph with a few hubs on both sides benefits from degree order.
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i < 40; ++i) {
    edges.emplace_back(0, i);
    edges.emplace_back(i, 0);
    edges.emplace_back(i, (i * 7 + 3) % 40);
  }
  auto hubs = BipartiteGraph::from_edges(40, 40, edges);
  EXPECT_GE(wedge_metric_f(hubs, rank_approx_degree(hubs)), kSideOrderThreshold);
  EXPECT_EQ(choose_ranking_auto(hubs), RankKind::ApproxDegree);
}
