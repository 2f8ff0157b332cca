#include <gtest/gtest.h>

#include <map>
#include <random>

#include "bfly/aggregation.hpp"

using namespace bfly;

namespace {

constexpr AggregationMethod kTableMethods[] = {AggregationMethod::Sort, AggregationMethod::Hash,
                                               AggregationMethod::Hist};

std::vector<KeyCount> reference(const std::vector<KeyCount>& items) {
  std::map<std::uint64_t, Count> m;
  for (const auto& kc : items) m[kc.key] += kc.count;
  std::vector<KeyCount> out;
  for (const auto& [k, c] : m) out.push_back({k, c});
  return out;
}

}  // namespace

TEST(Aggregation, NamesRoundTrip) {
  for (auto m : kTableMethods) EXPECT_EQ(parse_aggregation(aggregation_name(m)), m);
  EXPECT_EQ(parse_aggregation("batchs"), AggregationMethod::BatchSimple);
  EXPECT_EQ(parse_aggregation("batchwa"), AggregationMethod::BatchWedgeAware);
  EXPECT_THROW(parse_aggregation("nope"), ConfigError);
}

TEST(Aggregation, MatchesMapReference) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 17u, 1000u, 50000u}) {
    for (std::uint64_t range : {std::uint64_t{5}, std::uint64_t{1000}, std::uint64_t{1} << 40}) {
      std::vector<KeyCount> items(n);
      std::vector<std::uint64_t> keys(n);
      for (std::size_t i = 0; i < n; ++i) {
        keys[i] = rng() % range;
        items[i] = {keys[i], 1 + rng() % 4};
      }
      auto ref = reference(items);
      std::vector<KeyCount> unit;
      for (auto k : keys) unit.push_back({k, 1});
      auto ref_unit = reference(unit);
      for (auto m : kTableMethods) {
        EXPECT_EQ(aggregate_sum(items, m), ref) << aggregation_name(m) << " n=" << n;
        EXPECT_EQ(aggregate_keys(keys, m), ref_unit) << aggregation_name(m) << " n=" << n;
      }
    }
  }
}

TEST(Aggregation, ParallelSort) {
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> v(200000);
  for (auto& x : v) x = rng();
  auto expect = v;
  std::sort(expect.begin(), expect.end());
  parallel_sort(v);
  EXPECT_EQ(v, expect);
}

TEST(Aggregation, MergeSum) {
  const std::vector<KeyCount> a{{1, 2}, {4, 1}, {9, 3}};
  const std::vector<KeyCount> b{{0, 1}, {4, 5}, {10, 1}};
  EXPECT_EQ(merge_sum(a, b), (std::vector<KeyCount>{{0, 1}, {1, 2}, {4, 6}, {9, 3}, {10, 1}}));
  EXPECT_EQ(merge_sum(a, {}), a);
}

TEST(ConcurrentCountTable, AddFindAndSortedEntries) {
  ConcurrentCountTable t(100);
  EXPECT_GE(t.capacity(), 100u);
#pragma omp parallel for
  for (int i = 0; i < 1000; ++i) t.add(static_cast<std::uint64_t>(i % 37) * 1000003, 1);
  for (std::uint64_t k = 0; k < 37; ++k) {
    auto c = t.find(k * 1000003);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(*c, k < 1000 % 37 ? 28u : 27u);
  }
  EXPECT_FALSE(t.find(5).has_value());
  auto e = t.sorted_entries();
  ASSERT_EQ(e.size(), 37u);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i - 1].key, e[i].key);
}
