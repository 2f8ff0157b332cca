#include "bfly/bucketing.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <unordered_map>

#include "bfly/fib_heap.hpp"

namespace bfly {

std::string_view bucket_backend_name(BucketBackend b) {
  return b == BucketBackend::Dense ? "dense" : "fib";
}

BucketBackend parse_bucket_backend(std::string_view name) {
  if (name == "dense") return BucketBackend::Dense;
  if (name == "fib") return BucketBackend::Fib;
  throw ConfigError("unknown bucket backend '" + std::string(name) + "'");
}

class BucketImpl {
 public:
  BucketImpl(const std::vector<Count>& key, const std::vector<std::uint8_t>& live)
      : key_(key), live_(live) {}
  virtual ~BucketImpl() = default;
  virtual void build(std::span<const ElementId> elements) = 0;
  virtual std::optional<Bucket> pop() = 0;
  // Triples are validated and have new_key < old_key; key_ still holds the
  // old keys during the call.
  virtual void apply(std::span<const UpdateTriple> triples) = 0;
  virtual std::map<Count, std::vector<ElementId>> snapshot() const = 0;
  virtual std::uint64_t probes() const { return 0; }

 protected:
  const std::vector<Count>& key_;
  const std::vector<std::uint8_t>& live_;
};

namespace {

// Hash table from key to bucket plus a Fibonacci heap of buckets. Emptied
// buckets that could not be decreased stay in the heap and are skipped.
class FibBuckets final : public BucketImpl {
 public:
  using BucketImpl::BucketImpl;

  void build(std::span<const ElementId> elements) override {
    bucket_of_.assign(key_.size(), kNoBucket);
    pos_.assign(key_.size(), 0);
    std::vector<std::pair<Count, ElementId>> byk;
    byk.reserve(elements.size());
    for (ElementId e : elements) byk.emplace_back(key_[e], e);
    std::sort(byk.begin(), byk.end());
    insert_grouped(byk);
  }

  std::optional<Bucket> pop() override {
    while (!heap_.empty()) {
      const auto item = heap_.par_delete_min();
      const auto b = static_cast<std::uint32_t>(item.value);
      Rec& rec = buckets_[b];
      if (!rec.in_table || rec.members.empty()) {
        release(b);
        continue;
      }
      table_.erase(rec.key);
      Bucket out{rec.key, std::move(rec.members)};
      std::sort(out.members.begin(), out.members.end());
      for (ElementId e : out.members) bucket_of_[e] = kNoBucket;
      release(b);
      return out;
    }
    return std::nullopt;
  }

  void apply(std::span<const UpdateTriple> triples) override {
    std::vector<UpdateTriple> sorted(triples.begin(), triples.end());
    std::sort(sorted.begin(), sorted.end(), [](const UpdateTriple& a, const UpdateTriple& b) {
      return a.old_key != b.old_key ? a.old_key < b.old_key : a.element < b.element;
    });

    std::vector<std::pair<FibHeap::Handle, Count>> decreases;
    std::vector<std::pair<Count, ElementId>> inserts;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j].old_key == sorted[i].old_key) ++j;
      const Count k = sorted[i].old_key;
      const std::uint32_t b = table_.at(k);
      Rec& rec = buckets_[b];
      const std::size_t nk = j - i;
      if (nk == rec.members.size()) {
        // Whole bucket moves; its lowest element keeps the heap node.
        const UpdateTriple& first = sorted[i];
        table_.erase(k);
        if (!table_.contains(first.new_key)) {
          rec.key = first.new_key;
          table_.emplace(first.new_key, b);
          decreases.emplace_back(rec.node, first.new_key);
          for (std::size_t t = i + 1; t < j; ++t) {
            remove_member(sorted[t].element);
            inserts.emplace_back(sorted[t].new_key, sorted[t].element);
          }
        } else {
          rec.in_table = false;
          for (std::size_t t = i; t < j; ++t) {
            remove_member(sorted[t].element);
            inserts.emplace_back(sorted[t].new_key, sorted[t].element);
          }
        }
      } else {
        for (std::size_t t = i; t < j; ++t) {
          remove_member(sorted[t].element);
          inserts.emplace_back(sorted[t].new_key, sorted[t].element);
        }
      }
      i = j;
    }
    heap_.batch_decrease_key(decreases);
    std::sort(inserts.begin(), inserts.end());
    insert_grouped(inserts);
  }

  std::map<Count, std::vector<ElementId>> snapshot() const override {
    std::map<Count, std::vector<ElementId>> out;
    for (const auto& [k, b] : table_) {
      auto members = buckets_[b].members;
      std::sort(members.begin(), members.end());
      if (!members.empty()) out.emplace(k, std::move(members));
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kNoBucket = ~std::uint32_t{0};

  struct Rec {
    Count key = 0;
    std::vector<ElementId> members;
    FibHeap::Handle node = FibHeap::kNone;
    bool in_table = false;
  };

  // Pairs sorted by key; appends to existing buckets or creates new ones.
  void insert_grouped(const std::vector<std::pair<Count, ElementId>>& byk) {
    std::vector<FibHeap::Item> fresh;
    std::vector<std::uint32_t> fresh_ids;
    for (std::size_t i = 0; i < byk.size();) {
      const Count k = byk[i].first;
      std::uint32_t b;
      if (auto it = table_.find(k); it != table_.end()) {
        b = it->second;
      } else {
        b = acquire();
        buckets_[b].key = k;
        buckets_[b].in_table = true;
        table_.emplace(k, b);
        fresh.push_back({k, b});
        fresh_ids.push_back(b);
      }
      for (; i < byk.size() && byk[i].first == k; ++i) add_member(b, byk[i].second);
    }
    auto handles = heap_.batch_insert(fresh);
    for (std::size_t t = 0; t < handles.size(); ++t) buckets_[fresh_ids[t]].node = handles[t];
  }

  void add_member(std::uint32_t b, ElementId e) {
    bucket_of_[e] = b;
    pos_[e] = buckets_[b].members.size();
    buckets_[b].members.push_back(e);
  }

  void remove_member(ElementId e) {
    auto& m = buckets_[bucket_of_[e]].members;
    const std::size_t p = pos_[e];
    m[p] = m.back();
    pos_[m[p]] = p;
    m.pop_back();
    bucket_of_[e] = kNoBucket;
  }

  std::uint32_t acquire() {
    if (!free_.empty()) {
      const std::uint32_t b = free_.back();
      free_.pop_back();
      return b;
    }
    buckets_.emplace_back();
    return static_cast<std::uint32_t>(buckets_.size() - 1);
  }

  void release(std::uint32_t b) {
    buckets_[b] = Rec{};
    free_.push_back(b);
  }

  FibHeap heap_;
  std::unordered_map<Count, std::uint32_t> table_;
  std::vector<Rec> buckets_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> bucket_of_;
  std::vector<std::size_t> pos_;
};

// A window of 128 consecutive keys plus an ordered overflow map. Entries are
// lazy: an element may leave stale copies behind, filtered on pop.
class DenseBuckets final : public BucketImpl {
 public:
  using BucketImpl::BucketImpl;
  static constexpr std::size_t kWindow = 128;

  void build(std::span<const ElementId> elements) override {
    if (elements.empty()) return;
    base_ = key_[elements.front()];
    for (ElementId e : elements) base_ = std::min(base_, key_[e]);
    cur_ = 0;
    for (ElementId e : elements) place(e, key_[e]);
  }

  std::optional<Bucket> pop() override {
    std::vector<ElementId> found;
    while (true) {
      for (; cur_ < kWindow; ++cur_) {
        ++probes_;
        const Count k = base_ + cur_;
        auto& slot = window_[cur_];
        for (ElementId e : slot) {
          if (live_[e] && key_[e] == k) found.push_back(e);
        }
        slot.clear();
        if (!found.empty()) {
          std::sort(found.begin(), found.end());
          return Bucket{k, std::move(found)};
        }
      }
      if (overflow_.empty()) return std::nullopt;
      rebase(overflow_.begin()->first);
    }
  }

  void apply(std::span<const UpdateTriple> triples) override {
    for (const auto& t : triples) {
      if (t.new_key < base_) rebase(t.new_key);
      place(t.element, t.new_key);
    }
  }

  std::map<Count, std::vector<ElementId>> snapshot() const override {
    std::map<Count, std::vector<ElementId>> out;
    auto scan = [&](Count k, const std::vector<ElementId>& entries) {
      for (ElementId e : entries) {
        if (live_[e] && key_[e] == k) out[k].push_back(e);
      }
    };
    for (std::size_t i = 0; i < kWindow; ++i) scan(base_ + i, window_[i]);
    for (const auto& [k, entries] : overflow_) scan(k, entries);
    for (auto& [k, m] : out) std::sort(m.begin(), m.end());
    return out;
  }

  std::uint64_t probes() const override { return probes_; }

 private:
  void place(ElementId e, Count k) {
    if (k - base_ < kWindow) {
      window_[k - base_].push_back(e);
      cur_ = std::min<std::size_t>(cur_, k - base_);
    } else {
      overflow_[k].push_back(e);
    }
  }

  // Moves the window to start at new_base and refills it from overflow.
  void rebase(Count new_base) {
    for (std::size_t i = 0; i < kWindow; ++i) {
      if (window_[i].empty()) continue;
      auto& dst = overflow_[base_ + i];
      dst.insert(dst.end(), window_[i].begin(), window_[i].end());
      window_[i].clear();
    }
    base_ = new_base;
    cur_ = 0;
    while (!overflow_.empty() && overflow_.begin()->first - base_ < kWindow) {
      auto node = overflow_.extract(overflow_.begin());
      window_[node.key() - base_] = std::move(node.mapped());
    }
  }

  Count base_ = 0;
  std::size_t cur_ = kWindow;
  std::array<std::vector<ElementId>, kWindow> window_;
  std::map<Count, std::vector<ElementId>> overflow_;
  std::uint64_t probes_ = 0;
};

std::vector<ElementId> iota_elements(std::size_t n) {
  std::vector<ElementId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

BucketQueue::BucketQueue(std::span<const Count> counts, BucketBackend backend)
    : BucketQueue(counts.size(), iota_elements(counts.size()), counts, backend) {}

BucketQueue::BucketQueue(std::size_t universe, std::span<const ElementId> elements,
                         std::span<const Count> counts, BucketBackend backend)
    : backend_(backend), state_(std::make_unique<BucketState>()), stamp_(universe, 0) {
  auto& key_ = state_->key;
  auto& live_ = state_->live;
  key_.assign(universe, 0);
  live_.assign(universe, 0);
  if (elements.size() != counts.size()) throw ContractError("elements and counts differ in size");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const ElementId e = elements[i];
    if (e >= universe || live_[e]) throw ContractError("bad or repeated bucket element");
    key_[e] = counts[i];
    live_[e] = 1;
  }
  live_count_ = elements.size();
  if (backend == BucketBackend::Fib) {
    impl_ = std::make_unique<FibBuckets>(key_, live_);
  } else {
    impl_ = std::make_unique<DenseBuckets>(key_, live_);
  }
  impl_->build(elements);
}

BucketQueue::~BucketQueue() = default;
BucketQueue::BucketQueue(BucketQueue&&) noexcept = default;
BucketQueue& BucketQueue::operator=(BucketQueue&&) noexcept = default;

std::optional<Bucket> BucketQueue::pop_min() {
  auto& live_ = state_->live;
  if (live_count_ == 0) return std::nullopt;
  auto b = impl_->pop();
  if (!b) throw Error("bucket structure lost live elements");
  for (ElementId e : b->members) live_[e] = 0;
  live_count_ -= b->members.size();
  return b;
}

void BucketQueue::update(std::span<const UpdateTriple> triples) {
  auto& key_ = state_->key;
  auto& live_ = state_->live;
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  std::vector<UpdateTriple> moving;
  for (const auto& t : triples) {
    if (t.element >= live_.size() || !live_[t.element]) {
      throw ContractError("bucket update for an element that is not live");
    }
    if (stamp_[t.element] == epoch_) throw ContractError("element repeated in one bucket update");
    stamp_[t.element] = epoch_;
    if (t.old_key != key_[t.element]) throw ContractError("bucket update with a stale old key");
    if (t.new_key > t.old_key) throw ContractError("bucket keys may only decrease");
    if (t.new_key != t.old_key) moving.push_back(t);
  }
  if (moving.empty()) return;
  impl_->apply(moving);
  for (const auto& t : moving) key_[t.element] = t.new_key;
}

std::map<Count, std::vector<ElementId>> BucketQueue::snapshot() const { return impl_->snapshot(); }

std::uint64_t BucketQueue::probes() const { return impl_->probes(); }

}  // namespace bfly
