#include "bfly/fib_heap.hpp"

#include <algorithm>
#include <sstream>

namespace bfly {

FibHeap::Handle FibHeap::allocate(Count key, std::uint64_t value) {
  Handle h;
  if (!free_.empty()) {
    h = free_.back();
    free_.pop_back();
  } else {
    h = static_cast<Handle>(nodes_.size());
    nodes_.emplace_back();
    stamp_.push_back(0);
  }
  Node& n = nodes_[h];
  n.key = key;
  n.value = value;
  n.parent = kNone;
  n.marks = 0;
  n.live = true;
  n.children.clear();
  return h;
}

void FibHeap::add_root(Handle h) {
  nodes_[h].parent = kNone;
  nodes_[h].pos = static_cast<std::uint32_t>(roots_.size());
  roots_.push_back(h);
}

void FibHeap::remove_root(Handle h) {
  const std::uint32_t p = nodes_[h].pos;
  roots_[p] = roots_.back();
  nodes_[roots_[p]].pos = p;
  roots_.pop_back();
}

std::vector<FibHeap::Handle> FibHeap::batch_insert(std::span<const Item> items) {
  std::vector<Handle> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    const Handle h = allocate(it.key, it.value);
    add_root(h);
    if (min_ == kNone || less(h, min_)) min_ = h;
    out.push_back(h);
  }
  size_ += items.size();
  return out;
}

FibHeap::Handle FibHeap::insert(Count key, std::uint64_t value) {
  const Item item{key, value};
  return batch_insert(std::span<const Item>(&item, 1)).front();
}

std::optional<FibHeap::Item> FibHeap::min() const {
  if (min_ == kNone) return std::nullopt;
  return Item{nodes_[min_].key, nodes_[min_].value};
}

void FibHeap::link(Handle winner, Handle loser) {
  Node& l = nodes_[loser];
  l.parent = winner;
  l.marks = 0;
  l.pos = static_cast<std::uint32_t>(nodes_[winner].children.size());
  nodes_[winner].children.push_back(loser);
}

// Rounds: group roots by rank, pair each group in root-list order, link every
// pair (the smaller key wins), repeat until no two roots share a rank.
void FibHeap::consolidate() {
  std::vector<Handle> order;
  std::vector<std::pair<Handle, Handle>> pairs;
  while (true) {
    order = roots_;
    std::stable_sort(order.begin(), order.end(), [&](Handle a, Handle b) {
      return nodes_[a].children.size() < nodes_[b].children.size();
    });
    pairs.clear();
    for (std::size_t i = 0; i + 1 < order.size();) {
      if (nodes_[order[i]].children.size() == nodes_[order[i + 1]].children.size()) {
        Handle a = order[i], b = order[i + 1];
        if (less(b, a)) std::swap(a, b);
        pairs.emplace_back(a, b);
        i += 2;
      } else {
        ++i;
      }
    }
    if (pairs.empty()) break;
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static) if (np > 1024)
    for (std::ptrdiff_t i = 0; i < np; ++i) link(pairs[i].first, pairs[i].second);
    std::vector<Handle> next;
    next.reserve(roots_.size() - pairs.size());
    for (Handle r : roots_) {
      if (nodes_[r].parent == kNone) {
        nodes_[r].pos = static_cast<std::uint32_t>(next.size());
        next.push_back(r);
      }
    }
    roots_ = std::move(next);
    ++stats_.link_rounds;
    stats_.links += pairs.size();
  }
}

void FibHeap::recompute_min() {
  min_ = kNone;
  for (Handle r : roots_) {
    if (min_ == kNone || less(r, min_)) min_ = r;
  }
}

FibHeap::Item FibHeap::par_delete_min() {
  if (min_ == kNone) throw ContractError("delete-min on an empty heap");
  const Handle m = min_;
  Node& node = nodes_[m];
  const Item out{node.key, node.value};
  remove_root(m);
  for (Handle c : node.children) add_root(c);
  node.children.clear();
  node.live = false;
  free_.push_back(m);
  --size_;
  consolidate();
  recompute_min();
  return out;
}

void FibHeap::cut(Handle h) {
  Node& n = nodes_[h];
  Node& p = nodes_[n.parent];
  const std::uint32_t pos = n.pos;
  p.children[pos] = p.children.back();
  nodes_[p.children[pos]].pos = pos;
  p.children.pop_back();
  add_root(h);
  ++stats_.cuts;
}

void FibHeap::batch_decrease_key(std::span<const std::pair<Handle, Count>> updates) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  for (const auto& [h, k] : updates) {
    if (!contains(h)) throw ContractError("decrease-key on a dead handle");
    if (stamp_[h] == epoch_) throw ContractError("handle repeated in one decrease-key batch");
    if (k > nodes_[h].key) throw ContractError("decrease-key would increase a key");
    stamp_[h] = epoch_;
  }
  for (const auto& [h, k] : updates) nodes_[h].key = k;

  // First round: nodes now below their parent.
  std::vector<Handle> to_cut;
  for (const auto& [h, k] : updates) {
    const Handle p = nodes_[h].parent;
    if (p != kNone && less(h, p)) to_cut.push_back(h);
  }
  std::sort(to_cut.begin(), to_cut.end());
  std::vector<Handle> marked;
  while (!to_cut.empty()) {
    ++stats_.cut_rounds;
    marked.clear();
    for (Handle h : to_cut) {
      const Handle p = nodes_[h].parent;
      cut(h);
      ++nodes_[p].marks;
      marked.push_back(p);
    }
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    to_cut.clear();
    for (Handle p : marked) {
      Node& n = nodes_[p];
      if (n.parent != kNone && n.marks > 1) {
        n.marks &= 1u;
        to_cut.push_back(p);
      }
    }
  }
  recompute_min();
}

std::uint64_t FibHeap::total_marks() const {
  std::uint64_t t = 0;
  for (const auto& n : nodes_) {
    if (n.live) t += n.marks;
  }
  return t;
}

bool FibHeap::root_ranks_distinct() const {
  std::vector<std::size_t> ranks;
  for (Handle r : roots_) ranks.push_back(nodes_[r].children.size());
  std::sort(ranks.begin(), ranks.end());
  return std::adjacent_find(ranks.begin(), ranks.end()) == ranks.end();
}

std::string FibHeap::check_invariants() const {
  std::size_t reached = 0;
  std::vector<Handle> stack;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const Handle r = roots_[i];
    if (!nodes_[r].live) return "dead root";
    if (nodes_[r].parent != kNone) return "root with a parent";
    if (nodes_[r].pos != i) return "root position mismatch";
    stack.push_back(r);
  }
  while (!stack.empty()) {
    const Handle h = stack.back();
    stack.pop_back();
    ++reached;
    const Node& n = nodes_[h];
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const Handle c = n.children[i];
      const Node& cn = nodes_[c];
      if (!cn.live) return "dead child";
      if (cn.parent != h || cn.pos != i) return "child link mismatch";
      if (less(c, h)) return "heap order violated";
      stack.push_back(c);
    }
  }
  if (reached != size_) return "size mismatch";
  if (size_ == 0) return min_ == kNone ? "" : "min set on empty heap";
  if (min_ == kNone || !nodes_[min_].live || nodes_[min_].parent != kNone) return "bad min";
  for (Handle r : roots_) {
    if (less(r, min_)) return "min is not minimal";
  }
  return "";
}

std::string FibHeap::dump() const {
  std::ostringstream os;
  std::vector<std::pair<Handle, int>> stack;
  std::vector<Handle> rs(roots_.begin(), roots_.end());
  std::sort(rs.begin(), rs.end(), [&](Handle a, Handle b) { return less(b, a); });
  for (Handle r : rs) stack.emplace_back(r, 0);
  while (!stack.empty()) {
    auto [h, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes_[h];
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.key << '[' << n.value
       << "] m=" << n.marks << '\n';
    std::vector<Handle> cs(n.children.begin(), n.children.end());
    std::sort(cs.begin(), cs.end(), [&](Handle a, Handle b) { return less(b, a); });
    for (Handle c : cs) stack.emplace_back(c, depth + 1);
  }
  return os.str();
}

}  // namespace bfly
