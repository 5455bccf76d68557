#ifndef FIBC_TRIE_HPP
#define FIBC_TRIE_HPP

#include <map>
#include <string>
#include <vector>

#include "fibc/fib.hpp"

namespace fibc {

// Binary prefix tree over W-bit keys. Node 0 is the root; a node with both
// children absent is a leaf. Depth counts edges from the root, so "level j"
// nodes sit j edges down.
class Trie {
 public:
  struct Node {
    int32_t left = -1;
    int32_t right = -1;
    Label label = kNoLabel;
  };

  explicit Trie(uint32_t width = 32) : width_(width), nodes_(1) {}

  uint32_t width() const { return width_; }
  const Node& node(int32_t i) const { return nodes_[size_t(i)]; }
  Node& node(int32_t i) { return nodes_[size_t(i)]; }
  int32_t root() const { return 0; }
  size_t node_count() const { return nodes_.size(); }
  bool is_leaf(int32_t i) const {
    return nodes_[size_t(i)].left < 0 && nodes_[size_t(i)].right < 0;
  }
  int32_t add_node() {
    nodes_.emplace_back();
    return int32_t(nodes_.size() - 1);
  }

  bool normalized() const { return normalized_; }
  void set_normalized(bool v) { normalized_ = v; }

 private:
  uint32_t width_;
  std::vector<Node> nodes_;
  bool normalized_ = false;  // proper and leaf-labeled (leaf_push from level 0)
};

Trie build_trie(const FibTable& fib);

// Normalize every sub-trie rooted at depth `from_level`, seeding the push
// with the root's own label (or the invalid label when it has none), then
// merge identically labeled sibling leaves bottom-up. from_level = 0 yields
// the unique proper leaf-labeled normal form; from_level = W is the identity.
Trie leaf_push(const Trie& t, uint32_t from_level);

// Walk the address bits and return the last valid label on the path. The
// invalid label marks uncovered leaves and is skipped, so the result matches
// FibTable::lookup on the generating table. kBot means no route.
Label trie_lookup(const Trie& t, uint32_t addr);
Label trie_lookup_counted(const Trie& t, uint32_t addr, uint32_t* visits);

struct TrieStats {
  uint64_t node_count = 0;  // t
  uint64_t leaf_count = 0;  // n
  uint32_t depth = 0;
  std::map<Label, uint64_t> leaf_histogram;  // leaf labels incl. kBot if any
};

TrieStats trie_stats(const Trie& t);

// P1 (proper) and P2 (labels exactly on leaves) over the whole trie.
bool is_proper_leaf_labeled(const Trie& t);

std::string trie_to_dot(const Trie& t);

}  // namespace fibc

#endif  // FIBC_TRIE_HPP
