#ifndef FIBC_PREFIX_DAG_HPP
#define FIBC_PREFIX_DAG_HPP

#include <map>
#include <unordered_map>
#include <vector>

#include "fibc/fib.hpp"
#include "fibc/trie.hpp"

namespace fibc {

struct DagSizeReport {
  uint64_t above_nodes = 0;       // private region, levels < lambda
  uint64_t folded_interiors = 0;  // shared region interior nodes
  uint64_t live_leaves = 0;       // coalesced leaves with references
  uint64_t total_nodes = 0;
  std::map<uint32_t, uint64_t> level_counts;  // level -> distinct nodes there
  double kappa = 0;          // root of k*2^k = 2^W * log2(delta)
  uint32_t pointer_bits = 0; // ceil(kappa)
  uint32_t label_bits = 0;   // ceil(log2 delta)
  double analytic_bits = 0;  // one pointer + label above, two pointers below
  uint64_t resident_bytes = 0;
};

// Trie-folded forwarding structure. Levels above the leaf-push barrier stay
// a plain mutable prefix tree mirroring the control trie; levels at and
// below it hold the leaf-pushed normal form with identical sub-tries merged
// through a reference-counted sub-trie index and a per-label leaf table.
// The intact control trie drives updates. All labels are in the dense
// [1, delta] space of the originating table.
class PrefixDag {
 public:
  PrefixDag(const FibTable& fib, uint32_t lambda);

  Label lookup(uint32_t addr) const;
  Label lookup_counted(uint32_t addr, uint32_t* visits) const;

  // Change the label of an existing entry / add a new entry / remove an
  // existing entry. Precondition violations throw std::invalid_argument.
  void change(const Prefix& p, Label s);
  void insert(const Prefix& p, Label s);
  void erase(const Prefix& p);

  uint32_t width() const { return width_; }
  uint32_t barrier() const { return lambda_; }
  uint32_t delta() const { return delta_; }
  const Trie& control() const { return control_; }
  FibTable control_fib() const;

  uint64_t node_count() const;  // private + folded interiors + live leaves
  uint64_t build_visits() const { return build_visits_; }

  // Per-update work, in the units the update-cost bound is stated in:
  // nodes on the descent path, decompression copies and their later
  // re-compressions, plus the address-span (leaf slots) of the re-packed
  // region. Capped by W + 2^(W - lambda) for every operation.
  uint64_t last_op_visits() const { return op_visits_; }
  // Raw structural operations of the last update (acquisitions, releases,
  // copies); a diagnostic, not a bounded quantity.
  uint64_t last_op_node_ops() const { return op_node_ops_; }

  DagSizeReport size_report() const;

  // Full structural audit: refcounts equal recomputed in-degrees, the
  // sub-trie index and leaf table are injective over live nodes, the
  // private region mirrors the control trie above the barrier, and the
  // folded region is proper and leaf-labeled. Throws on violation.
  void check_invariants() const;

  // Serialized lookup engine access (see DagBlob).
  friend class DagBlob;

 private:
  static constexpr uint32_t kNil = 0xFFFFFFFFu;
  struct Node {
    uint32_t left = kNil, right = kNil;
    Label label = kNoLabel;
    uint64_t id = 0;
    uint32_t rc = 0;
    bool shared = false;
  };
  struct Slot {
    uint32_t parent = kNil;  // kNil: the root handle
    int side = 0;
  };
  using Key = std::pair<uint64_t, uint64_t>;
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = k.first * 0x9e3779b97f4a7c15ull;
      h ^= k.second + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return size_t(h);
    }
  };

  uint32_t alloc();
  void free_node(uint32_t i);
  uint32_t child_of(uint32_t v, int side) const {
    return side ? nodes_[v].right : nodes_[v].left;
  }
  void set_slot(const Slot& s, uint32_t v);
  uint32_t slot_value(const Slot& s) const;

  uint32_t acquire_leaf(Label represented);
  uint64_t leaf_represented(uint32_t v) const;
  uint32_t fold_control(int32_t cv, Label inherited);
  void release(uint32_t v);
  uint32_t decompress(uint32_t v, const Slot& s);
  uint32_t recompress(uint32_t u, const Slot& s);

  uint32_t mirror_above(int32_t cv, uint32_t depth);
  uint32_t copy_private(int32_t cv);

  void mutate(const Prefix& p, Label s, int op);  // 0 change, 1 insert, 2 erase
  void private_edit(const Prefix& p, Label s, int op);
  void folded_edit(const Prefix& p, Label s, int op);
  void prune_private_path(std::vector<std::pair<uint32_t, Slot>>& path);

  uint32_t width_ = 32;
  uint32_t lambda_ = 0;
  uint32_t delta_ = 0;
  Trie control_{32};
  std::vector<Node> nodes_;
  std::vector<uint32_t> freelist_;
  std::unordered_map<uint64_t, uint32_t> leaf_table_;   // label -> leaf node
  std::unordered_map<Key, uint32_t, KeyHash> index_;    // (lid, rid) -> node
  uint64_t next_id_ = 1;
  uint32_t root_ = kNil;
  uint64_t private_count_ = 0;
  uint64_t build_visits_ = 0;
  uint64_t op_visits_ = 0;
  uint64_t op_node_ops_ = 0;
};

// Flat serialized form: the first lambda levels collapse into a 2^lambda
// jump table of (folded node, inherited label) pairs; the folded region is
// one node array. This is the fast-path lookup engine and the byte format.
class DagBlob {
 public:
  static DagBlob from_dag(const PrefixDag& dag);

  Label lookup(uint32_t addr) const;
  Label lookup_counted(uint32_t addr, uint32_t* visits) const;

  uint32_t width() const { return width_; }
  uint32_t barrier() const { return lambda_; }
  uint32_t delta() const { return delta_; }
  uint64_t node_count() const { return nodes_.size(); }

  void serialize(ByteWriter& w) const;
  static DagBlob deserialize(ByteReader& r);
  bool operator==(const DagBlob& o) const;

 private:
  struct Entry {
    uint32_t node = 0;   // 1-based into nodes_, 0 = none
    uint32_t label = 0;  // inherited label, 0 = none
  };
  struct BNode {
    uint32_t left = 0, right = 0;  // 1-based, 0 = none (leaf)
    uint32_t label = 0;            // 0 = none (the cleared invalid leaf)
  };
  uint32_t width_ = 32;
  uint32_t delta_ = 0;
  uint32_t lambda_ = 0;
  std::vector<Entry> jump_;
  std::vector<BNode> nodes_;
};

}  // namespace fibc

#endif  // FIBC_PREFIX_DAG_HPP
