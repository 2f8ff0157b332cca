#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bfly/types.hpp"

namespace bfly {

enum class AggregationMethod { Sort, Hash, Hist, BatchSimple, BatchWedgeAware };

std::string_view aggregation_name(AggregationMethod m);
AggregationMethod parse_aggregation(std::string_view name);  // throws ConfigError

inline bool is_batching(AggregationMethod m) {
  return m == AggregationMethod::BatchSimple || m == AggregationMethod::BatchWedgeAware;
}

inline constexpr std::uint64_t kDefaultMaxWedgesInFlight = std::uint64_t{1} << 27;
inline constexpr std::size_t kDefaultBatchVertices = 512;

struct AggregationConfig {
  AggregationMethod method = AggregationMethod::BatchSimple;
  // Upper bound on materialized wedges (sort/hash/hist) and on the wedges in
  // one wedge-aware batch.
  std::uint64_t max_wedges_in_flight = kDefaultMaxWedgesInFlight;
  // Vertices per batch for simple batching.
  std::size_t batch_vertices = kDefaultBatchVertices;
};

struct KeyCount {
  std::uint64_t key = 0;
  Count count = 0;
  bool operator==(const KeyCount&) const = default;
};

// Parallel sample sort. Falls back to std::sort on small inputs.
void parallel_sort(std::span<std::uint64_t> keys);
void parallel_sort(std::span<KeyCount> items);  // by key

// Linear-probing table with atomic additive combining. Keys must differ from
// kEmpty. Safe for concurrent add/find; not resizable.
class ConcurrentCountTable {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  explicit ConcurrentCountTable(std::size_t expected_distinct);

  void add(std::uint64_t key, Count delta);
  std::optional<Count> find(std::uint64_t key) const;
  std::size_t capacity() const { return mask_ + 1; }
  // Occupied entries sorted by key.
  std::vector<KeyCount> sorted_entries() const;

 private:
  std::size_t slot_of(std::uint64_t key) const;

  std::size_t mask_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> keys_;
  std::unique_ptr<std::atomic<Count>[]> counts_;
};

// Sums the counts of equal keys with the given method (sort, hash or hist).
// The result is sorted by key with every count >= 1 for unit inputs.
std::vector<KeyCount> aggregate_sum(std::vector<KeyCount> items, AggregationMethod method);
std::vector<KeyCount> aggregate_keys(std::vector<std::uint64_t> keys, AggregationMethod method);

// Merges two key-sorted tables, summing equal keys.
std::vector<KeyCount> merge_sum(std::span<const KeyCount> a, std::span<const KeyCount> b);

}  // namespace bfly
