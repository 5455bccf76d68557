#include "fibc/trie.hpp"

#include <algorithm>
#include <deque>

namespace fibc {

Trie build_trie(const FibTable& fib) {
  Trie t(fib.width());
  for (const FibEntry& e : fib.entries()) {
    int32_t v = t.root();
    for (uint32_t q = 0; q < e.prefix.len; ++q) {
      uint32_t bit = addr_bit(e.prefix.bits, q, fib.width());
      int32_t& child = bit ? t.node(v).right : t.node(v).left;
      if (child < 0) {
        int32_t fresh = t.add_node();
        (bit ? t.node(v).right : t.node(v).left) = fresh;
        v = fresh;
      } else {
        v = child;
      }
    }
    t.node(v).label = e.label;
  }
  return t;
}

namespace {

struct Pusher {
  Trie& t;

  void push(int32_t v, Label inherited) {
    Label lab = t.node(v).label != kNoLabel ? t.node(v).label : inherited;
    if (t.is_leaf(v)) {
      t.node(v).label = lab;  // may be kBot: uncovered leaf
      return;
    }
    t.node(v).label = kNoLabel;
    if (t.node(v).left < 0) t.node(v).left = t.add_node();
    if (t.node(v).right < 0) t.node(v).right = t.add_node();
    push(t.node(v).left, lab);
    push(t.node(v).right, lab);
  }

  // Postorder merge: a parent of two identically labeled leaves becomes a
  // leaf with that label. Children are abandoned and dropped by compaction.
  void merge(int32_t v) {
    if (t.is_leaf(v)) return;
    merge(t.node(v).left);
    merge(t.node(v).right);
    int32_t l = t.node(v).left, r = t.node(v).right;
    if (t.is_leaf(l) && t.is_leaf(r) && t.node(l).label == t.node(r).label) {
      t.node(v).label = t.node(l).label;
      t.node(v).left = t.node(v).right = -1;
    }
  }

  void normalize_at(int32_t v, uint32_t depth, uint32_t barrier) {
    if (depth == barrier) {
      Label seed = t.node(v).label != kNoLabel ? t.node(v).label : kBot;
      push(v, seed);
      merge(v);
      return;
    }
    if (t.node(v).left >= 0) normalize_at(t.node(v).left, depth + 1, barrier);
    if (t.node(v).right >= 0) normalize_at(t.node(v).right, depth + 1, barrier);
  }
};

Trie compact(const Trie& t) {
  // Rebuild in BFS order so equal tries get identical layouts.
  Trie out(t.width());
  out.set_normalized(t.normalized());
  std::deque<std::pair<int32_t, int32_t>> queue;  // (old node, new node)
  queue.emplace_back(t.root(), out.root());
  while (!queue.empty()) {
    auto [ov, nv] = queue.front();
    queue.pop_front();
    out.node(nv).label = t.node(ov).label;
    if (t.node(ov).left >= 0) {
      int32_t c = out.add_node();
      out.node(nv).left = c;
      queue.emplace_back(t.node(ov).left, c);
    }
    if (t.node(ov).right >= 0) {
      int32_t c = out.add_node();
      out.node(nv).right = c;
      queue.emplace_back(t.node(ov).right, c);
    }
  }
  return out;
}

}  // namespace

Trie leaf_push(const Trie& t, uint32_t from_level) {
  if (from_level > t.width())
    throw std::invalid_argument("leaf-push barrier exceeds width");
  Trie work = t;
  if (from_level < t.width()) {
    Pusher p{work};
    p.normalize_at(work.root(), 0, from_level);
  }
  work.set_normalized(from_level == 0);
  return compact(work);
}

Label trie_lookup(const Trie& t, uint32_t addr) {
  uint32_t visits = 0;
  return trie_lookup_counted(t, addr, &visits);
}

Label trie_lookup_counted(const Trie& t, uint32_t addr, uint32_t* visits) {
  Label last = kBot;
  int32_t v = t.root();
  uint32_t count = 0;
  for (uint32_t q = 0;; ++q) {
    ++count;
    Label lab = t.node(v).label;
    if (lab != kNoLabel && lab != kBot) last = lab;
    if (q == t.width()) break;
    int32_t next = addr_bit(addr, q, t.width()) ? t.node(v).right
                                                : t.node(v).left;
    if (next < 0) break;
    v = next;
  }
  *visits = count;
  return last;
}

TrieStats trie_stats(const Trie& t) {
  TrieStats s;
  std::deque<std::pair<int32_t, uint32_t>> queue;
  queue.emplace_back(t.root(), 0);
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    ++s.node_count;
    s.depth = std::max(s.depth, d);
    if (t.is_leaf(v)) {
      ++s.leaf_count;
      Label lab = t.node(v).label;
      if (lab != kNoLabel) ++s.leaf_histogram[lab];
    } else {
      if (t.node(v).left >= 0) queue.emplace_back(t.node(v).left, d + 1);
      if (t.node(v).right >= 0) queue.emplace_back(t.node(v).right, d + 1);
    }
  }
  return s;
}

bool is_proper_leaf_labeled(const Trie& t) {
  for (int32_t v = 0; v < int32_t(t.node_count()); ++v) {
    bool leaf = t.is_leaf(v);
    bool half = (t.node(v).left < 0) != (t.node(v).right < 0);
    if (half) return false;
    if (leaf && t.node(v).label == kNoLabel) return false;
    if (!leaf && t.node(v).label != kNoLabel) return false;
  }
  return true;
}

std::string trie_to_dot(const Trie& t) {
  std::string out = "digraph trie {\n  node [shape=circle];\n";
  for (int32_t v = 0; v < int32_t(t.node_count()); ++v) {
    out += "  n" + std::to_string(v) + " [label=\"";
    Label lab = t.node(v).label;
    if (lab == kBot)
      out += "bot";
    else if (lab != kNoLabel)
      out += std::to_string(lab);
    out += "\"];\n";
    if (t.node(v).left >= 0)
      out += "  n" + std::to_string(v) + " -> n" +
             std::to_string(t.node(v).left) + " [label=\"0\"];\n";
    if (t.node(v).right >= 0)
      out += "  n" + std::to_string(v) + " -> n" +
             std::to_string(t.node(v).right) + " [label=\"1\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace fibc
