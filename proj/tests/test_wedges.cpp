#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "bfly/wedges.hpp"
#include "test_support.hpp"

using namespace bfly;
using bfly::testing::figure1;
using bfly::testing::random_bipartite;

namespace {

constexpr AggregationMethod kMethods[] = {AggregationMethod::Sort, AggregationMethod::Hash,
                                          AggregationMethod::Hist, AggregationMethod::BatchSimple,
                                          AggregationMethod::BatchWedgeAware};

using Triple = std::tuple<VertexId, VertexId, VertexId>;

std::vector<Triple> collect(const RankedGraph& rg, bool cache_opt) {
  std::vector<Triple> out;
  std::mutex mu;
  auto visit = [&](const WedgeRef& w) {
    std::lock_guard lock(mu);
    out.emplace_back(w.e1, w.e2, w.c);
  };
  if (cache_opt) {
    get_wedges_cacheopt(rg, visit);
  } else {
    get_wedges(rg, visit);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Reference frequencies straight from the retrieval condition.
std::map<std::pair<VertexId, VertexId>, Count> reference_freq(const RankedGraph& rg) {
  std::map<std::pair<VertexId, VertexId>, Count> m;
  for (VertexId x = 0; x < rg.num_vertices(); ++x) {
    for (VertexId y : rg.neighbors(x)) {
      if (y <= x) continue;
      for (VertexId z : rg.neighbors(y)) {
        if (z > x) ++m[{x, z}];
      }
    }
  }
  return m;
}

}  // namespace

TEST(Wedges, FigureOneDegreeOrder) {
  auto g = figure1();
  auto rg = preprocess(g, rank_degree(g));
  auto w = collect(rg, false);
  EXPECT_EQ(w.size(), 6u);
  EXPECT_EQ(std::count_if(w.begin(), w.end(), [](const Triple& t) { return std::get<0>(t) == 0; }),
            4);
  EXPECT_EQ(std::count_if(w.begin(), w.end(), [](const Triple& t) { return std::get<0>(t) == 1; }),
            2);
  for (const auto& [e1, e2, c] : w) {
    EXPECT_LT(e1, c);
    EXPECT_LT(e1, e2);
  }
  EXPECT_EQ(count_retrieved_wedges(rg), 6u);
}

TEST(Wedges, SlotsPointAtTheWedgeEdges) {
  auto g = random_bipartite(20, 20, 0.3, 3);
  auto rg = preprocess(g, rank_approx_degree(g));
  for (bool co : {false, true}) {
    // A slot joins a and b when it sits in one's list and points at the other.
    auto joins = [&](std::size_t slot, VertexId a, VertexId b) {
      auto owns = [&](VertexId x) {
        return slot >= rg.slot_begin(x) && slot < rg.slot_begin(x) + rg.degree(x);
      };
      return (owns(a) && rg.slot_target(slot) == b) || (owns(b) && rg.slot_target(slot) == a);
    };
    auto check = [&](const WedgeRef& w) {
      EXPECT_TRUE(joins(w.slot_e1, w.e1, w.c));
      EXPECT_TRUE(joins(w.slot_e2, w.e2, w.c));
    };
    for (VertexId x = 0; x < rg.num_vertices(); ++x) {
      for_each_anchored_wedge(rg, x, co, [&](VertexId, const WedgeRef& w) { check(w); });
    }
  }
}

TEST(Wedges, CacheOptimizedYieldsSameMultiset) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = random_bipartite(30, 25, 0.25, s);
    for (auto k : {RankKind::Side, RankKind::Degree, RankKind::ApproxCoDegeneracy}) {
      auto rg = preprocess(g, make_ranking(g, k));
      auto plain = collect(rg, false);
      EXPECT_EQ(plain, collect(rg, true));
      EXPECT_EQ(plain.size(), count_retrieved_wedges(rg));
      auto a = anchor_wedge_counts(rg, false), b = anchor_wedge_counts(rg, true);
      Count sa = 0, sb = 0;
      for (Count c : a) sa += c;
      for (Count c : b) sb += c;
      EXPECT_EQ(sa, plain.size());
      EXPECT_EQ(sb, plain.size());
    }
  }
}

TEST(Wedges, EdgelessGraph) {
  auto g = BipartiteGraph::from_edges(4, 3, {});
  auto rg = preprocess(g, rank_degree(g));
  EXPECT_TRUE(collect(rg, false).empty());
  for (auto m : kMethods) {
    AggregationConfig cfg;
    cfg.method = m;
    EXPECT_TRUE(get_freq(rg, cfg, false).entries.empty());
  }
}

TEST(GetFreq, FigureOne) {
  auto g = figure1();
  auto rg = preprocess(g, rank_degree(g));
  const std::vector<KeyCount> expected{{WedgeCountTable::key(6, 0, 3), 2},
                                       {WedgeCountTable::key(6, 0, 4), 2},
                                       {WedgeCountTable::key(6, 1, 2), 2}};
  for (auto m : kMethods) {
    for (bool co : {false, true}) {
      AggregationConfig cfg;
      cfg.method = m;
      auto t = get_freq(rg, cfg, co);
      EXPECT_EQ(t.entries, expected) << aggregation_name(m) << " cacheopt=" << co;
      EXPECT_EQ(t.lookup(3, 0), 2u);
      EXPECT_EQ(t.lookup(2, 4), 0u);
      EXPECT_EQ(t.total_wedges(), 6u);
    }
  }
}

TEST(GetFreq, BackendsAgreeWithReference) {
  for (std::uint64_t s = 0; s < 12; ++s) {
    auto g = random_bipartite(35, 30, s % 2 ? 0.3 : 0.1, s);
    auto rg = preprocess(g, rank_approx_degree(g));
    auto ref = reference_freq(rg);
    for (auto m : kMethods) {
      for (bool co : {false, true}) {
        // Small budgets force many chunks and splitting of heavy anchors.
        for (std::uint64_t budget : {kDefaultMaxWedgesInFlight, std::uint64_t{7}}) {
          AggregationConfig cfg;
          cfg.method = m;
          cfg.max_wedges_in_flight = budget;
          cfg.batch_vertices = 3;
          if (m == AggregationMethod::BatchWedgeAware) {
            auto per = anchor_wedge_counts(rg, co);
            if (*std::max_element(per.begin(), per.end()) > budget) {
              EXPECT_THROW(get_freq(rg, cfg, co), ConfigError);
              continue;
            }
          }
          EngineStats st;
          auto t = get_freq(rg, cfg, co, &st);
          ASSERT_EQ(t.entries.size(), ref.size());
          std::size_t i = 0;
          for (const auto& [pair, c] : ref) {
            EXPECT_EQ(t.entries[i].key, WedgeCountTable::key(rg.num_vertices(), pair.first,
                                                             pair.second));
            EXPECT_EQ(t.entries[i].count, c);
            ++i;
          }
          EXPECT_EQ(st.wedges, count_retrieved_wedges(rg));
        }
      }
    }
  }
}

TEST(BatchPlan, WedgeAwareGreedy) {
  AggregationConfig cfg;
  cfg.method = AggregationMethod::BatchWedgeAware;
  cfg.max_wedges_in_flight = 100;
  const std::vector<Count> per{5, 5, 90, 5};
  EXPECT_EQ(batch_plan(per, cfg), (std::vector<AnchorRange>{{0, 3}, {3, 4}}));
  const std::vector<Count> heavy{5, 101};
  EXPECT_THROW(batch_plan(heavy, cfg), ConfigError);
}

TEST(BatchPlan, SimpleFixedSize) {
  AggregationConfig cfg;
  cfg.method = AggregationMethod::BatchSimple;
  cfg.batch_vertices = 2;
  const std::vector<Count> per{1, 1, 1, 1, 1};
  EXPECT_EQ(batch_plan(per, cfg), (std::vector<AnchorRange>{{0, 2}, {2, 4}, {4, 5}}));
  EXPECT_TRUE(batch_plan(std::vector<Count>{}, cfg).empty());
}

TEST(ChunkPlan, HeavyAnchorStandsAlone) {
  const std::vector<Count> per{3, 3, 50, 2, 2};
  EXPECT_EQ(chunk_plan(per, 10), (std::vector<AnchorRange>{{0, 2}, {2, 3}, {3, 5}}));
}
