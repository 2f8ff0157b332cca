#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bfly/types.hpp"

namespace bfly {

enum class BucketBackend { Dense, Fib };
std::string_view bucket_backend_name(BucketBackend b);
BucketBackend parse_bucket_backend(std::string_view name);

using ElementId = std::uint64_t;

struct UpdateTriple {
  Count old_key = 0;
  ElementId element = 0;
  Count new_key = 0;
};

struct Bucket {
  Count key = 0;
  std::vector<ElementId> members;  // ascending
  bool operator==(const Bucket&) const = default;
};

class BucketImpl;

struct BucketState {
  std::vector<Count> key;
  std::vector<std::uint8_t> live;
};

// Count -> set of elements. Elements are ids in [0, n); each live element
// sits in exactly one bucket whose key is its current count. Keys only
// decrease.
class BucketQueue {
 public:
  // Every element 0..counts.size()-1 starts live with its count.
  BucketQueue(std::span<const Count> counts, BucketBackend backend);
  // Only the listed elements start live. universe bounds element ids.
  BucketQueue(std::size_t universe, std::span<const ElementId> elements,
              std::span<const Count> counts, BucketBackend backend);
  ~BucketQueue();
  BucketQueue(BucketQueue&&) noexcept;
  BucketQueue& operator=(BucketQueue&&) noexcept;

  BucketBackend backend() const { return backend_; }
  bool empty() const { return live_count_ == 0; }
  std::size_t size() const { return live_count_; }
  bool is_live(ElementId e) const { return state_->live[e] != 0; }
  Count key_of(ElementId e) const { return state_->key[e]; }

  // Removes and returns the minimum-key bucket; nullopt when empty.
  std::optional<Bucket> pop_min();

  // Moves each element to its new key. Triples with new_key == old_key are
  // ignored. Throws ContractError for dead or repeated elements, a stale
  // old_key or an increase.
  void update(std::span<const UpdateTriple> triples);

  // Every bucket with its members, by scanning the backend's structure.
  std::map<Count, std::vector<ElementId>> snapshot() const;

  // Dense backend: window slots inspected so far. Zero for fib.
  std::uint64_t probes() const;

 private:
  BucketBackend backend_;
  std::unique_ptr<BucketState> state_;  // heap-held so the backend's references survive moves
  std::size_t live_count_ = 0;
  std::unique_ptr<BucketImpl> impl_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace bfly
