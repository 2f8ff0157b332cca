#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfly/types.hpp"

namespace bfly {

// Batch-parallel Fibonacci heap over integer keys.
//
// Nodes live in a pool and are addressed by stable handles until deleted.
// Heap order is on (key, handle), so equal keys pop in handle order.
// Marks are integers: a cut adds one mark to the former parent, and parents
// holding more than one mark are cut in the next round with their marks
// reduced to parity. One batch operation runs at a time.
class FibHeap {
 public:
  using Handle = std::uint32_t;
  static constexpr Handle kNone = ~Handle{0};

  struct Item {
    Count key = 0;
    std::uint64_t value = 0;
  };

  struct Stats {
    std::uint64_t link_rounds = 0;
    std::uint64_t links = 0;
    std::uint64_t cut_rounds = 0;
    std::uint64_t cuts = 0;
  };

  // One singleton tree per item. Returns handles in input order.
  std::vector<Handle> batch_insert(std::span<const Item> items);
  Handle insert(Count key, std::uint64_t value);

  // Removes the minimum (ties: smaller handle), promotes its children, then
  // links equal-rank roots in rounds until all root ranks differ.
  // Throws ContractError when empty.
  Item par_delete_min();

  // Lowers keys of distinct live nodes. A new key above the current key, a
  // dead handle or a repeated handle throws ContractError before any change.
  void batch_decrease_key(std::span<const std::pair<Handle, Count>> updates);

  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  std::optional<Item> min() const;
  Handle min_handle() const { return min_; }

  bool contains(Handle h) const { return h < nodes_.size() && nodes_[h].live; }
  Count key(Handle h) const { return nodes_[h].key; }
  std::uint64_t value(Handle h) const { return nodes_[h].value; }
  Handle parent(Handle h) const { return nodes_[h].parent; }
  std::size_t rank(Handle h) const { return nodes_[h].children.size(); }
  std::uint32_t marks(Handle h) const { return nodes_[h].marks; }
  std::span<const Handle> children(Handle h) const { return nodes_[h].children; }
  std::span<const Handle> roots() const { return roots_; }

  // t(H) and total marks, exposed as statistics only.
  std::size_t num_trees() const { return roots_.size(); }
  std::uint64_t total_marks() const;
  const Stats& stats() const { return stats_; }

  // Empty string when every structural invariant holds, else a description.
  std::string check_invariants() const;
  bool root_ranks_distinct() const;

  // Indented tree dump: "key[value] m=<marks>" per node, children nested.
  std::string dump() const;

 private:
  struct Node {
    Count key = 0;
    std::uint64_t value = 0;
    Handle parent = kNone;
    std::uint32_t pos = 0;  // index in parent's children or in roots_
    std::uint32_t marks = 0;
    bool live = false;
    std::vector<Handle> children;
  };

  Handle allocate(Count key, std::uint64_t value);
  void add_root(Handle h);
  void remove_root(Handle h);
  void cut(Handle h);
  void link(Handle winner, Handle loser);
  void consolidate();
  void recompute_min();
  bool less(Handle a, Handle b) const {
    return nodes_[a].key < nodes_[b].key || (nodes_[a].key == nodes_[b].key && a < b);
  }

  std::vector<Node> nodes_;
  std::vector<Handle> free_;
  std::vector<Handle> roots_;
  Handle min_ = kNone;
  std::size_t size_ = 0;
  Stats stats_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace bfly
