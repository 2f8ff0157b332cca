#include "bfly/aggregation.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "bfly/parallel.hpp"

namespace bfly {

std::string_view aggregation_name(AggregationMethod m) {
  switch (m) {
    case AggregationMethod::Sort: return "sort";
    case AggregationMethod::Hash: return "hash";
    case AggregationMethod::Hist: return "hist";
    case AggregationMethod::BatchSimple: return "batchs";
    case AggregationMethod::BatchWedgeAware: return "batchwa";
  }
  return "?";
}

AggregationMethod parse_aggregation(std::string_view name) {
  for (auto m : {AggregationMethod::Sort, AggregationMethod::Hash, AggregationMethod::Hist,
                 AggregationMethod::BatchSimple, AggregationMethod::BatchWedgeAware}) {
    if (aggregation_name(m) == name) return m;
  }
  throw ConfigError("unknown aggregation method '" + std::string(name) + "'");
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t key_of(std::uint64_t k) { return k; }
inline std::uint64_t key_of(const KeyCount& kc) { return kc.key; }

constexpr std::size_t kSerialSortCutoff = std::size_t{1} << 15;

template <class T>
void sample_sort(std::span<T> data) {
  auto less = [](const T& a, const T& b) { return key_of(a) < key_of(b); };
  const int workers = num_workers();
  if (data.size() < kSerialSortCutoff || workers == 1) {
    std::sort(data.begin(), data.end(), less);
    return;
  }
  const std::size_t num_buckets = static_cast<std::size_t>(workers) * 8;
  const std::size_t oversample = 16;

  // Splitters from a deterministic sample.
  std::mt19937_64 rng(data.size());
  std::vector<std::uint64_t> sample(num_buckets * oversample);
  for (auto& s : sample) s = key_of(data[rng() % data.size()]);
  std::sort(sample.begin(), sample.end());
  std::vector<std::uint64_t> splitters(num_buckets - 1);
  for (std::size_t i = 0; i + 1 < num_buckets; ++i) splitters[i] = sample[(i + 1) * oversample];

  auto bucket_of = [&](const T& x) {
    return static_cast<std::size_t>(
        std::upper_bound(splitters.begin(), splitters.end(), key_of(x)) - splitters.begin());
  };

  const std::size_t blocks = static_cast<std::size_t>(workers);
  const std::size_t block_len = (data.size() + blocks - 1) / blocks;
  std::vector<std::size_t> counts(blocks * num_buckets, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * block_len;
    const std::size_t hi = std::min(data.size(), lo + block_len);
    for (std::size_t i = lo; i < hi; ++i) ++counts[b * num_buckets + bucket_of(data[i])];
  }
  // Column-major scan: bucket-major, block-minor.
  std::vector<std::size_t> offsets(blocks * num_buckets);
  std::size_t running = 0;
  std::vector<std::size_t> bucket_start(num_buckets + 1);
  for (std::size_t k = 0; k < num_buckets; ++k) {
    bucket_start[k] = running;
    for (std::size_t b = 0; b < blocks; ++b) {
      offsets[b * num_buckets + k] = running;
      running += counts[b * num_buckets + k];
    }
  }
  bucket_start[num_buckets] = running;

  std::vector<T> out(data.size());
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * block_len;
    const std::size_t hi = std::min(data.size(), lo + block_len);
    std::size_t* off = offsets.data() + b * num_buckets;
    for (std::size_t i = lo; i < hi; ++i) out[off[bucket_of(data[i])]++] = data[i];
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < num_buckets; ++k) {
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(bucket_start[k]),
              out.begin() + static_cast<std::ptrdiff_t>(bucket_start[k + 1]), less);
  }
  std::copy(out.begin(), out.end(), data.begin());
}

std::vector<KeyCount> run_length_sum(std::span<const KeyCount> sorted) {
  std::vector<KeyCount> out;
  for (const auto& kc : sorted) {
    if (!out.empty() && out.back().key == kc.key) {
      out.back().count += kc.count;
    } else {
      out.push_back(kc);
    }
  }
  return out;
}

std::vector<KeyCount> aggregate_by_sort(std::vector<KeyCount> items) {
  parallel_sort(std::span<KeyCount>(items));
  return run_length_sum(items);
}

std::vector<KeyCount> aggregate_by_hash(const std::vector<KeyCount>& items) {
  ConcurrentCountTable table(items.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < items.size(); ++i) table.add(items[i].key, items[i].count);
  return table.sorted_entries();
}

// Histogramming: a hash-partitioned semisort into small buckets, then local
// sort-and-count inside each bucket.
std::vector<KeyCount> aggregate_by_hist(const std::vector<KeyCount>& items) {
  if (items.empty()) return {};
  const std::size_t num_buckets = std::bit_ceil(std::max<std::size_t>(1, items.size() / 512));
  const std::size_t mask = num_buckets - 1;
  const int workers = num_workers();
  const std::size_t blocks = static_cast<std::size_t>(workers);
  const std::size_t block_len = (items.size() + blocks - 1) / blocks;

  std::vector<std::size_t> counts(blocks * num_buckets, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * block_len;
    const std::size_t hi = std::min(items.size(), lo + block_len);
    for (std::size_t i = lo; i < hi; ++i) ++counts[b * num_buckets + (mix64(items[i].key) & mask)];
  }
  std::vector<std::size_t> offsets(blocks * num_buckets);
  std::vector<std::size_t> bucket_start(num_buckets + 1);
  std::size_t running = 0;
  for (std::size_t k = 0; k < num_buckets; ++k) {
    bucket_start[k] = running;
    for (std::size_t b = 0; b < blocks; ++b) {
      offsets[b * num_buckets + k] = running;
      running += counts[b * num_buckets + k];
    }
  }
  bucket_start[num_buckets] = running;
  std::vector<KeyCount> scattered(items.size());
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * block_len;
    const std::size_t hi = std::min(items.size(), lo + block_len);
    std::size_t* off = offsets.data() + b * num_buckets;
    for (std::size_t i = lo; i < hi; ++i) scattered[off[mix64(items[i].key) & mask]++] = items[i];
  }

  std::vector<std::size_t> distinct(num_buckets + 1, 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t k = 0; k < num_buckets; ++k) {
    auto first = scattered.begin() + static_cast<std::ptrdiff_t>(bucket_start[k]);
    auto last = scattered.begin() + static_cast<std::ptrdiff_t>(bucket_start[k + 1]);
    std::sort(first, last, [](const KeyCount& a, const KeyCount& b) { return a.key < b.key; });
    // Compact in place.
    auto write = first;
    for (auto it = first; it != last; ++it) {
      if (write != first && (write - 1)->key == it->key) {
        (write - 1)->count += it->count;
      } else {
        *write++ = *it;
      }
    }
    distinct[k] = static_cast<std::size_t>(write - first);
  }
  std::vector<std::size_t> out_start(num_buckets + 1, 0);
  for (std::size_t k = 0; k < num_buckets; ++k) out_start[k + 1] = out_start[k] + distinct[k];
  std::vector<KeyCount> out(out_start[num_buckets]);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < num_buckets; ++k) {
    std::copy_n(scattered.begin() + static_cast<std::ptrdiff_t>(bucket_start[k]), distinct[k],
                out.begin() + static_cast<std::ptrdiff_t>(out_start[k]));
  }
  parallel_sort(std::span<KeyCount>(out));
  return out;
}

}  // namespace

void parallel_sort(std::span<std::uint64_t> keys) { sample_sort(keys); }
void parallel_sort(std::span<KeyCount> items) { sample_sort(items); }

ConcurrentCountTable::ConcurrentCountTable(std::size_t expected_distinct)
    : mask_(std::bit_ceil(std::max<std::size_t>(16, expected_distinct * 2)) - 1),
      keys_(new std::atomic<std::uint64_t>[mask_ + 1]),
      counts_(new std::atomic<Count>[mask_ + 1]) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i <= mask_; ++i) {
    keys_[i].store(kEmpty, std::memory_order_relaxed);
    counts_[i].store(0, std::memory_order_relaxed);
  }
}

std::size_t ConcurrentCountTable::slot_of(std::uint64_t key) const {
  return static_cast<std::size_t>(mix64(key)) & mask_;
}

void ConcurrentCountTable::add(std::uint64_t key, Count delta) {
  std::size_t i = slot_of(key);
  for (std::size_t probes = 0; probes <= mask_; ++probes, i = (i + 1) & mask_) {
    std::uint64_t cur = keys_[i].load(std::memory_order_acquire);
    if (cur == kEmpty) {
      std::uint64_t expected = kEmpty;
      if (keys_[i].compare_exchange_strong(expected, key, std::memory_order_acq_rel)) {
        counts_[i].fetch_add(delta, std::memory_order_relaxed);
        return;
      }
      cur = expected;
    }
    if (cur == key) {
      counts_[i].fetch_add(delta, std::memory_order_relaxed);
      return;
    }
  }
  throw ResourceError("concurrent count table is full");
}

std::optional<Count> ConcurrentCountTable::find(std::uint64_t key) const {
  std::size_t i = slot_of(key);
  for (std::size_t probes = 0; probes <= mask_; ++probes, i = (i + 1) & mask_) {
    const std::uint64_t cur = keys_[i].load(std::memory_order_acquire);
    if (cur == key) return counts_[i].load(std::memory_order_relaxed);
    if (cur == kEmpty) return std::nullopt;
  }
  return std::nullopt;
}

std::vector<KeyCount> ConcurrentCountTable::sorted_entries() const {
  std::vector<KeyCount> out;
  for (std::size_t i = 0; i <= mask_; ++i) {
    const std::uint64_t k = keys_[i].load(std::memory_order_relaxed);
    if (k != kEmpty) out.push_back({k, counts_[i].load(std::memory_order_relaxed)});
  }
  parallel_sort(std::span<KeyCount>(out));
  return out;
}

std::vector<KeyCount> aggregate_sum(std::vector<KeyCount> items, AggregationMethod method) {
  switch (method) {
    case AggregationMethod::Sort: return aggregate_by_sort(std::move(items));
    case AggregationMethod::Hash: return aggregate_by_hash(items);
    case AggregationMethod::Hist: return aggregate_by_hist(items);
    default: throw ConfigError("batching methods do not aggregate key streams");
  }
}

std::vector<KeyCount> aggregate_keys(std::vector<std::uint64_t> keys, AggregationMethod method) {
  if (method == AggregationMethod::Sort) {
    parallel_sort(std::span<std::uint64_t>(keys));
    std::vector<KeyCount> out;
    for (std::uint64_t k : keys) {
      if (!out.empty() && out.back().key == k) {
        ++out.back().count;
      } else {
        out.push_back({k, 1});
      }
    }
    return out;
  }
  std::vector<KeyCount> items(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) items[i] = {keys[i], 1};
  return aggregate_sum(std::move(items), method);
}

std::vector<KeyCount> merge_sum(std::span<const KeyCount> a, std::span<const KeyCount> b) {
  std::vector<KeyCount> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].key < a[i].key) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].key, a[i].count + b[j].count});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace bfly
