#include "fibc/prefix_dag.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>

#include "fibc/entropy.hpp"

namespace fibc {

namespace {
constexpr uint32_t kPdagVersion = 1;
constexpr uint32_t kMaxBlobLambda = 22;  // 2^lambda jump entries
constexpr uint64_t kLeafIdBit = uint64_t{1} << 63;
}  // namespace

// ---------------------------------------------------------------------------
// arena
// ---------------------------------------------------------------------------

uint32_t PrefixDag::alloc() {
  if (!freelist_.empty()) {
    uint32_t i = freelist_.back();
    freelist_.pop_back();
    nodes_[i] = Node{};
    return i;
  }
  nodes_.emplace_back();
  return uint32_t(nodes_.size() - 1);
}

void PrefixDag::free_node(uint32_t i) {
  nodes_[i] = Node{};
  freelist_.push_back(i);
}

void PrefixDag::set_slot(const Slot& s, uint32_t v) {
  if (s.parent == kNil)
    root_ = v;
  else if (s.side)
    nodes_[s.parent].right = v;
  else
    nodes_[s.parent].left = v;
}

uint32_t PrefixDag::slot_value(const Slot& s) const {
  if (s.parent == kNil) return root_;
  return s.side ? nodes_[s.parent].right : nodes_[s.parent].left;
}

// ---------------------------------------------------------------------------
// folded-region primitives
// ---------------------------------------------------------------------------

uint64_t PrefixDag::leaf_represented(uint32_t v) const {
  return nodes_[v].id & ~kLeafIdBit;
}

uint32_t PrefixDag::acquire_leaf(Label represented) {
  auto it = leaf_table_.find(represented);
  if (it != leaf_table_.end()) return it->second;
  uint32_t v = alloc();
  // The invalid label is stripped from its coalesced leaf so a plain
  // last-label walk stays correct on the folded form.
  nodes_[v].label = represented == kBot ? kNoLabel : represented;
  nodes_[v].id = kLeafIdBit | represented;
  nodes_[v].shared = true;
  nodes_[v].rc = 0;
  leaf_table_.emplace(represented, v);
  return v;
}

uint32_t PrefixDag::fold_control(int32_t cv, Label inherited) {
  Label lab = inherited;
  if (cv >= 0 && control_.node(cv).label != kNoLabel)
    lab = control_.node(cv).label;
  ++op_node_ops_;
  if (cv < 0 || control_.is_leaf(cv)) return acquire_leaf(lab);
  uint32_t cl = fold_control(control_.node(cv).left, lab);
  uint32_t cr = fold_control(control_.node(cv).right, lab);
  if (cl == cr && (nodes_[cl].id & kLeafIdBit)) return cl;  // sibling merge
  Key key{nodes_[cl].id, nodes_[cr].id};
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  uint32_t w = alloc();
  nodes_[w].left = cl;
  nodes_[w].right = cr;
  nodes_[w].id = next_id_++;
  nodes_[w].shared = true;
  nodes_[w].rc = 0;
  ++nodes_[cl].rc;
  ++nodes_[cr].rc;
  index_.emplace(key, w);
  return w;
}

void PrefixDag::release(uint32_t v) {
  ++op_node_ops_;
  assert(nodes_[v].shared);
  if (--nodes_[v].rc > 0) return;
  if (nodes_[v].id & kLeafIdBit) return;  // leaves stay parked in the table
  index_.erase(Key{nodes_[nodes_[v].left].id, nodes_[nodes_[v].right].id});
  uint32_t l = nodes_[v].left, r = nodes_[v].right;
  free_node(v);
  release(l);
  release(r);
}

uint32_t PrefixDag::decompress(uint32_t v, const Slot& s) {
  ++op_node_ops_;
  uint32_t w = alloc();
  ++private_count_;
  nodes_[w].id = nodes_[v].id;
  nodes_[w].shared = false;
  nodes_[w].rc = 1;  // the slot edge
  if (nodes_[v].id & kLeafIdBit) {
    nodes_[w].label = nodes_[v].label;
  } else {
    nodes_[w].left = nodes_[v].left;
    nodes_[w].right = nodes_[v].right;
    ++nodes_[nodes_[w].left].rc;
    ++nodes_[nodes_[w].right].rc;
  }
  set_slot(s, w);
  release(v);
  return w;
}

uint32_t PrefixDag::recompress(uint32_t u, const Slot& s) {
  ++op_node_ops_;
  uint32_t cl = nodes_[u].left, cr = nodes_[u].right;
  if (cl == cr && (nodes_[cl].id & kLeafIdBit)) {
    // Both children are the same coalesced leaf: a from-scratch fold would
    // have merged this node away during leaf-pushing; do the same.
    ++nodes_[cl].rc;
    set_slot(s, cl);
    release(cl);
    release(cr);
    free_node(u);
    --private_count_;
    return cl;
  }
  Key key{nodes_[cl].id, nodes_[cr].id};
  if (auto it = index_.find(key); it != index_.end()) {
    uint32_t x = it->second;
    ++nodes_[x].rc;
    set_slot(s, x);
    release(cl);
    release(cr);
    free_node(u);
    --private_count_;
    return x;
  }
  nodes_[u].id = next_id_++;
  nodes_[u].shared = true;
  index_.emplace(key, u);
  --private_count_;
  return u;  // keeps its slot edge
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

uint32_t PrefixDag::copy_private(int32_t cv) {
  ++op_node_ops_;
  uint32_t p = alloc();
  ++private_count_;
  nodes_[p].label = control_.node(cv).label;
  nodes_[p].rc = 1;
  if (control_.node(cv).left >= 0)
    nodes_[p].left = copy_private(control_.node(cv).left);
  if (control_.node(cv).right >= 0)
    nodes_[p].right = copy_private(control_.node(cv).right);
  return p;
}

uint32_t PrefixDag::mirror_above(int32_t cv, uint32_t depth) {
  if (depth == lambda_) {
    uint32_t u = fold_control(cv, kBot);
    ++nodes_[u].rc;  // edge from the private parent (or the root handle)
    return u;
  }
  ++op_node_ops_;
  uint32_t p = alloc();
  ++private_count_;
  nodes_[p].label = control_.node(cv).label;
  nodes_[p].rc = 1;
  if (control_.node(cv).left >= 0) {
    uint32_t l = mirror_above(control_.node(cv).left, depth + 1);
    nodes_[p].left = l;
  }
  if (control_.node(cv).right >= 0) {
    uint32_t r = mirror_above(control_.node(cv).right, depth + 1);
    nodes_[p].right = r;
  }
  return p;
}

PrefixDag::PrefixDag(const FibTable& fib, uint32_t lambda)
    : width_(fib.width()), lambda_(lambda), delta_(fib.alphabet_size()),
      control_(build_trie(fib)) {
  if (lambda_ > width_) throw std::invalid_argument("barrier exceeds width");
  op_node_ops_ = 0;
  if (lambda_ >= width_) {
    root_ = copy_private(control_.root());
  } else {
    root_ = mirror_above(control_.root(), 0);
  }
  build_visits_ = op_node_ops_;
  op_node_ops_ = 0;
}

// ---------------------------------------------------------------------------
// lookup
// ---------------------------------------------------------------------------

Label PrefixDag::lookup(uint32_t addr) const {
  uint32_t visits = 0;
  return lookup_counted(addr, &visits);
}

Label PrefixDag::lookup_counted(uint32_t addr, uint32_t* visits) const {
  Label last = kBot;
  uint32_t v = root_;
  uint32_t count = 0;
  for (uint32_t q = 0; v != kNil; ++q) {
    ++count;
    Label lab = nodes_[v].label;
    if (lab != kNoLabel && lab != kBot) last = lab;
    if (q == width_) break;
    v = addr_bit(addr, q, width_) ? nodes_[v].right : nodes_[v].left;
  }
  *visits = count;
  return last;
}

// ---------------------------------------------------------------------------
// updates
// ---------------------------------------------------------------------------

namespace {

// Control-trie path along the bits of a prefix: nodes at depths [0, upto],
// stopping early where the path ends.
std::vector<int32_t> control_path(const Trie& t, const Prefix& p,
                                  uint32_t upto) {
  std::vector<int32_t> path{t.root()};
  int32_t v = t.root();
  for (uint32_t q = 0; q < upto; ++q) {
    int32_t next = addr_bit(p.bits, q, t.width()) ? t.node(v).right
                                                  : t.node(v).left;
    if (next < 0) break;
    path.push_back(next);
    v = next;
  }
  return path;
}

}  // namespace

void PrefixDag::change(const Prefix& p, Label s) { mutate(p, s, 0); }
void PrefixDag::insert(const Prefix& p, Label s) { mutate(p, s, 1); }
void PrefixDag::erase(const Prefix& p) { mutate(p, kNoLabel, 2); }

void PrefixDag::mutate(const Prefix& p, Label s, int op) {
  if (p.len > width_) throw std::invalid_argument("prefix longer than width");
  if (op != 2 && (s == kBot || s == kNoLabel))
    throw std::invalid_argument("label must be a valid next-hop");
  op_visits_ = 0;
  op_node_ops_ = 0;

  // Control FIB first; it is the authority the re-fold reads from.
  std::vector<int32_t> path = control_path(control_, p, p.len);
  bool exists =
      path.size() == p.len + 1 && control_.node(path.back()).label != kNoLabel;
  if (op == 0 && !exists)
    throw std::invalid_argument("change: entry not present");
  if (op == 1 && exists) throw std::invalid_argument("insert: entry present");
  if (op == 2 && !exists) throw std::invalid_argument("erase: entry not present");

  if (op == 1) {
    int32_t v = path.back();
    for (uint32_t q = uint32_t(path.size()) - 1; q < p.len; ++q) {
      int32_t fresh = control_.add_node();
      if (addr_bit(p.bits, q, width_))
        control_.node(v).right = fresh;
      else
        control_.node(v).left = fresh;
      v = fresh;
      path.push_back(v);
    }
    control_.node(v).label = s;
  } else if (op == 0) {
    control_.node(path.back()).label = s;
  } else {
    control_.node(path.back()).label = kNoLabel;
    for (size_t i = path.size(); i-- > 1;) {
      int32_t v = path[i];
      if (!control_.is_leaf(v) || control_.node(v).label != kNoLabel) break;
      int32_t parent = path[i - 1];
      if (control_.node(parent).left == v)
        control_.node(parent).left = -1;
      else
        control_.node(parent).right = -1;
    }
  }
  if (op != 2) delta_ = std::max(delta_, s);

  if (lambda_ >= width_ || p.len < lambda_)
    private_edit(p, s, op);
  else
    folded_edit(p, s, op);
}

void PrefixDag::private_edit(const Prefix& p, Label s, int op) {
  std::vector<std::pair<uint32_t, Slot>> path;
  uint32_t v = root_;
  path.push_back({v, Slot{kNil, 0}});
  for (uint32_t q = 0; q < p.len; ++q) {
    int side = int(addr_bit(p.bits, q, width_));
    uint32_t child = child_of(v, side);
    if (child == kNil) {
      if (op != 1) throw std::logic_error("private path missing");
      child = alloc();
      ++private_count_;
      nodes_[child].rc = 1;
      set_slot(Slot{v, side}, child);
    }
    path.push_back({child, Slot{v, side}});
    v = child;
  }
  if (op == 2) {
    nodes_[v].label = kNoLabel;
    prune_private_path(path);
  } else {
    nodes_[v].label = s;
  }
  op_visits_ = uint64_t(p.len) + 1;  // the descent path; pruning re-touches it
}

void PrefixDag::prune_private_path(
    std::vector<std::pair<uint32_t, Slot>>& path) {
  while (path.size() > 1) {
    auto [v, slot] = path.back();
    if (nodes_[v].left != kNil || nodes_[v].right != kNil ||
        nodes_[v].label != kNoLabel)
      break;
    set_slot(slot, kNil);
    free_node(v);
    --private_count_;
    path.pop_back();
  }
}

void PrefixDag::folded_edit(const Prefix& p, Label s, int op) {
  (void)s;  // the control trie already carries the new label
  // Deepest control depth that still exists along the path (post-mutation).
  std::vector<int32_t> cpath = control_path(control_, p, p.len);
  uint32_t e = uint32_t(cpath.size()) - 1;
  if (op != 2 && e != p.len) throw std::logic_error("control path incomplete");

  // Private segment down to depth lambda-1, creating the mirror of freshly
  // inserted control nodes on the way.
  std::vector<std::pair<uint32_t, Slot>> ppath;
  uint32_t v = root_;
  Slot slot{kNil, 0};
  if (lambda_ > 0) {
    ppath.push_back({v, Slot{kNil, 0}});
    for (uint32_t q = 0; q + 1 < lambda_; ++q) {
      int side = int(addr_bit(p.bits, q, width_));
      uint32_t child = child_of(v, side);
      if (child == kNil) {
        if (op != 1) throw std::logic_error("private path missing");
        child = alloc();
        ++private_count_;
        nodes_[child].rc = 1;
        set_slot(Slot{v, side}, child);
      }
      ppath.push_back({child, Slot{v, side}});
      v = child;
    }
    slot = Slot{v, int(addr_bit(p.bits, lambda_ - 1, width_))};
  }

  if (e < lambda_) {
    // The erase removed the whole branch below the barrier: drop the folded
    // child on this path and prune the mirrored private chain.
    uint32_t old = slot_value(slot);
    if (old != kNil) {
      release(old);
      set_slot(slot, kNil);
    }
    prune_private_path(ppath);
    op_visits_ = lambda_ + (uint64_t{1} << (width_ - lambda_));
    return;
  }

  uint32_t cur = slot_value(slot);
  uint32_t target = std::min(e, p.len);

  // Decompress down the folded path; stop at the surgery point: the target
  // depth, a coalesced leaf, or a missing attachment.
  std::vector<std::pair<uint32_t, Slot>> decompressed;
  uint32_t d = lambda_;
  while (cur != kNil && d < target && !(nodes_[cur].id & kLeafIdBit)) {
    uint32_t w = decompress(cur, slot);
    decompressed.push_back({w, slot});
    int side = int(addr_bit(p.bits, d, width_));
    slot = Slot{w, side};
    cur = child_of(w, side);
    ++d;
  }

  // Inherited label within the folded region strictly above the surgery
  // point; the barrier level seeds from the invalid label.
  Label seed = kBot;
  for (uint32_t q = lambda_; q < d; ++q) {
    Label lab = control_.node(cpath[q]).label;
    if (lab != kNoLabel) seed = lab;
  }

  uint32_t fresh = fold_control(cpath[d], seed);
  ++nodes_[fresh].rc;
  if (cur != kNil) release(cur);
  set_slot(slot, fresh);

  for (size_t i = decompressed.size(); i-- > 0;)
    recompress(decompressed[i].first, decompressed[i].second);

  // Update-cost accounting in the stated units: the walk down, the
  // decompress/re-compress pairs, and the leaf-slot span of the region
  // that was re-packed.
  op_visits_ = uint64_t(d) + 1 + 2 * decompressed.size() +
               (uint64_t{1} << (width_ - d));
}

// ---------------------------------------------------------------------------
// reporting and audits
// ---------------------------------------------------------------------------

FibTable PrefixDag::control_fib() const {
  std::vector<FibEntry> entries;
  struct Frame {
    int32_t v;
    uint32_t bits, len;
  };
  std::vector<Frame> stack{{control_.root(), 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    Label lab = control_.node(f.v).label;
    if (lab != kNoLabel) entries.push_back({Prefix{f.bits, f.len}, lab});
    if (control_.node(f.v).left >= 0)
      stack.push_back({control_.node(f.v).left, f.bits, f.len + 1});
    if (control_.node(f.v).right >= 0)
      stack.push_back(
          {control_.node(f.v).right,
           f.bits | (uint32_t{1} << (width_ - f.len - 1)), f.len + 1});
  }
  return FibTable::from_dense_entries(width_, std::move(entries), delta_);
}

uint64_t PrefixDag::node_count() const {
  uint64_t leaves = 0;
  for (auto& [lab, v] : leaf_table_)
    if (nodes_[v].rc > 0) ++leaves;
  return private_count_ + index_.size() + leaves;
}

DagSizeReport PrefixDag::size_report() const {
  DagSizeReport r;
  r.above_nodes = private_count_;
  r.folded_interiors = index_.size();
  for (auto& [lab, v] : leaf_table_)
    if (nodes_[v].rc > 0) ++r.live_leaves;
  r.total_nodes = r.above_nodes + r.folded_interiors + r.live_leaves;

  std::deque<std::pair<uint32_t, uint32_t>> queue{{root_, 0}};
  std::set<std::pair<uint32_t, uint32_t>> seen;  // (level, node)
  while (!queue.empty()) {
    auto [v, lev] = queue.front();
    queue.pop_front();
    if (v == kNil || !seen.insert({lev, v}).second) continue;
    ++r.level_counts[lev];
    if (nodes_[v].left != kNil) queue.push_back({nodes_[v].left, lev + 1});
    if (nodes_[v].right != kNil) queue.push_back({nodes_[v].right, lev + 1});
  }

  r.label_bits = delta_ > 1 ? ceil_log2(delta_) : 0;
  if (delta_ >= 2) {
    BarrierAnalysis b = solve_barrier_compact(std::exp2(double(width_)),
                                              double(delta_));
    r.kappa = b.kappa;
    r.pointer_bits = uint32_t(std::ceil(b.kappa - 1e-9));
  } else {
    r.kappa = 1;
    r.pointer_bits = 1;
  }
  r.analytic_bits =
      double(r.above_nodes) * (r.pointer_bits + r.label_bits) +
      double(r.folded_interiors) * 2.0 * r.pointer_bits +
      double(delta_) * r.label_bits;
  r.resident_bytes = (nodes_.size() - freelist_.size()) * sizeof(Node) +
                     index_.size() * (sizeof(Key) + 2 * sizeof(uint64_t)) +
                     leaf_table_.size() * (2 * sizeof(uint64_t));
  return r;
}

void PrefixDag::check_invariants() const {
  // Reachability sweep with in-degree recomputation.
  std::unordered_map<uint32_t, uint64_t> indeg;
  std::vector<uint32_t> order;
  std::set<uint32_t> seen;
  std::deque<uint32_t> queue{root_};
  indeg[root_] += 1;  // the root handle counts as an edge
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    if (!seen.insert(v).second) continue;
    order.push_back(v);
    for (int side = 0; side < 2; ++side) {
      uint32_t c = child_of(v, side);
      if (c == kNil) continue;
      ++indeg[c];
      queue.push_back(c);
    }
  }
  uint64_t reach_priv = 0, reach_shared_int = 0, reach_leaf = 0;
  for (uint32_t v : order) {
    const Node& n = nodes_[v];
    if (n.shared) {
      if (n.rc != indeg[v])
        throw std::logic_error("refcount disagrees with in-degree");
      if (n.id & kLeafIdBit) {
        ++reach_leaf;
        uint64_t rep = n.id & ~kLeafIdBit;
        if (n.left != kNil || n.right != kNil)
          throw std::logic_error("leaf with children");
        if (rep == kBot ? n.label != kNoLabel : n.label != rep)
          throw std::logic_error("leaf label mismatch");
        auto it = leaf_table_.find(Label(rep));
        if (it == leaf_table_.end() || it->second != v)
          throw std::logic_error("leaf not canonical in the leaf table");
      } else {
        ++reach_shared_int;
        if (n.left == kNil || n.right == kNil)
          throw std::logic_error("folded interior lacking a child");
        if (n.label != kNoLabel)
          throw std::logic_error("folded interior carrying a label");
        Key key{nodes_[n.left].id, nodes_[n.right].id};
        auto it = index_.find(key);
        if (it == index_.end() || it->second != v)
          throw std::logic_error("folded interior not canonical in the index");
      }
    } else {
      ++reach_priv;
      if (indeg[v] != 1)
        throw std::logic_error("private node with in-degree != 1");
      if (n.rc != 1) throw std::logic_error("private node refcount != 1");
    }
  }
  if (reach_priv != private_count_)
    throw std::logic_error("private node count drifted");
  if (reach_shared_int != index_.size())
    throw std::logic_error("sub-trie index holds unreachable entries");
  for (auto& [key, v] : index_) {
    const Node& n = nodes_[v];
    if (!n.shared || (n.id & kLeafIdBit))
      throw std::logic_error("index entry is not a shared interior");
    if (Key{nodes_[n.left].id, nodes_[n.right].id} != key)
      throw std::logic_error("index key disagrees with children ids");
  }
  for (auto& [lab, v] : leaf_table_) {
    if (nodes_[v].rc > 0 && !seen.count(v))
      throw std::logic_error("referenced leaf unreachable");
  }

  // The private region must mirror the control trie above the barrier.
  struct Pair {
    int32_t cv;
    uint32_t dv;
    uint32_t depth;
  };
  std::vector<Pair> stack{{control_.root(), root_, 0}};
  while (!stack.empty()) {
    auto [cv, dv, depth] = stack.back();
    stack.pop_back();
    if (depth >= lambda_ && lambda_ < width_) {
      if (dv == kNil || !nodes_[dv].shared)
        throw std::logic_error("barrier child is not a folded node");
      continue;
    }
    if (dv == kNil || nodes_[dv].shared)
      throw std::logic_error("private region does not mirror the control");
    if (nodes_[dv].label != control_.node(cv).label)
      throw std::logic_error("private label drifted from the control");
    for (int side = 0; side < 2; ++side) {
      int32_t cc = side ? control_.node(cv).right : control_.node(cv).left;
      uint32_t dc = child_of(dv, side);
      if ((cc < 0) != (dc == kNil))
        throw std::logic_error("private structure drifted from the control");
      if (cc >= 0) stack.push_back({cc, dc, depth + 1});
    }
  }
}

// ---------------------------------------------------------------------------
// DagBlob
// ---------------------------------------------------------------------------

DagBlob DagBlob::from_dag(const PrefixDag& dag) {
  if (dag.barrier() > kMaxBlobLambda)
    throw FormatError("jump table too large: barrier above 22");
  DagBlob b;
  b.width_ = dag.width();
  b.delta_ = dag.delta();
  b.lambda_ = dag.barrier();

  uint64_t slots = uint64_t{1} << b.lambda_;
  b.jump_.assign(slots, {});
  std::unordered_map<uint32_t, uint32_t> blob_id;  // dag node -> 1-based
  std::deque<uint32_t> pending;

  auto intern = [&](uint32_t v) {
    auto [it, fresh] = blob_id.emplace(v, uint32_t(blob_id.size() + 1));
    if (fresh) pending.push_back(v);
    return it->second;
  };

  for (uint64_t k = 0; k < slots; ++k) {
    uint32_t v = dag.root_;
    uint32_t lab = 0;
    for (uint32_t j = 0; j < b.lambda_ && v != PrefixDag::kNil; ++j) {
      const auto& n = dag.nodes_[v];
      if (n.shared) break;  // folded region reached early (lambda = 0 only)
      if (n.label != kNoLabel) lab = n.label;
      v = (k >> (b.lambda_ - 1 - j)) & 1 ? n.right : n.left;
    }
    Entry e;
    e.label = lab;
    if (v != PrefixDag::kNil) {
      if (dag.nodes_[v].shared) {
        e.node = intern(v);
      } else if (dag.nodes_[v].label != kNoLabel) {
        // Degenerate barrier (lambda = W): the walk consumed every bit and
        // ended on a private node; its label completes the answer.
        e.label = dag.nodes_[v].label;
      }
    }
    b.jump_[k] = e;
  }

  while (!pending.empty()) {
    uint32_t v = pending.front();
    pending.pop_front();
    const auto& n = dag.nodes_[v];
    BNode out;
    if (n.id & kLeafIdBit) {
      out.label = n.label == kNoLabel ? 0 : n.label;
    } else {
      out.left = intern(n.left);
      out.right = intern(n.right);
    }
    b.nodes_.push_back(out);
  }
  return b;
}

Label DagBlob::lookup(uint32_t addr) const {
  uint32_t visits = 0;
  return lookup_counted(addr, &visits);
}

Label DagBlob::lookup_counted(uint32_t addr, uint32_t* visits) const {
  uint64_t k = lambda_ == 0 ? 0 : uint64_t(addr) >> (width_ - lambda_);
  const Entry& e = jump_[k];
  // The jump collapses the top lambda levels into one access; with a zero
  // barrier it is vestigial and free.
  uint32_t count = lambda_ ? 1 : 0;
  uint32_t v = e.node;
  Label out = e.label;
  uint32_t q = lambda_;
  while (v != 0) {
    ++count;
    if (q > width_) throw FormatError("blob walk ran past the key width");
    const BNode& n = nodes_[v - 1];
    if (n.left == 0) {
      if (n.label != 0) out = n.label;
      break;
    }
    v = addr_bit(addr, q, width_) ? n.right : n.left;
    ++q;
  }
  *visits = count;
  return out == 0 ? kBot : out;
}

void DagBlob::serialize(ByteWriter& w) const {
  w.u32(fourcc("PDAG"));
  w.u32(kPdagVersion);
  w.u32(width_);
  w.u32(delta_);
  w.u32(lambda_);
  w.u64(nodes_.size());
  for (const Entry& e : jump_) {
    w.u32(e.node);
    w.u32(e.label);
  }
  for (const BNode& n : nodes_) {
    w.u32(n.left);
    w.u32(n.right);
    w.u32(n.label);
  }
}

DagBlob DagBlob::deserialize(ByteReader& r) {
  if (r.u32() != fourcc("PDAG")) throw FormatError("bad pdag magic");
  if (r.u32() != kPdagVersion) throw FormatError("unsupported pdag version");
  DagBlob b;
  b.width_ = r.u32();
  b.delta_ = r.u32();
  b.lambda_ = r.u32();
  if (b.width_ == 0 || b.width_ > 32 || b.lambda_ > b.width_ ||
      b.lambda_ > kMaxBlobLambda)
    throw FormatError("bad pdag geometry");
  uint64_t count = r.u64();
  b.jump_.resize(size_t{1} << b.lambda_);
  for (Entry& e : b.jump_) {
    e.node = r.u32();
    e.label = r.u32();
    if (e.node > count) throw FormatError("jump entry out of range");
  }
  b.nodes_.resize(count);
  for (BNode& n : b.nodes_) {
    n.left = r.u32();
    n.right = r.u32();
    n.label = r.u32();
    if (n.left > count || n.right > count)
      throw FormatError("node reference out of range");
    if ((n.left == 0) != (n.right == 0))
      throw FormatError("half-interior node in blob");
  }
  return b;
}

bool DagBlob::operator==(const DagBlob& o) const {
  auto tie = [](const DagBlob& d) {
    return std::tuple(d.width_, d.delta_, d.lambda_);
  };
  if (tie(*this) != tie(o) || jump_.size() != o.jump_.size() ||
      nodes_.size() != o.nodes_.size())
    return false;
  for (size_t i = 0; i < jump_.size(); ++i)
    if (jump_[i].node != o.jump_[i].node || jump_[i].label != o.jump_[i].label)
      return false;
  for (size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].left != o.nodes_[i].left ||
        nodes_[i].right != o.nodes_[i].right ||
        nodes_[i].label != o.nodes_[i].label)
      return false;
  return true;
}

}  // namespace fibc
