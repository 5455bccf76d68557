#ifndef FIBC_XBW_HPP
#define FIBC_XBW_HPP

#include "fibc/bitvector.hpp"
#include "fibc/labelseq.hpp"
#include "fibc/trie.hpp"

namespace fibc {

struct XbwSizeReport {
  uint64_t n = 0;
  uint64_t t = 0;
  uint32_t delta = 0;
  double h0 = 0;
  uint64_t bits_packed = 0;        // measured, packed labels
  uint64_t bits_entropy = 0;       // measured, entropy-coded labels
  uint64_t bound_info_bits = 0;    // 2n + n*ceil(log2 delta)
  double bound_entropy_bits = 0;   // 2n + n*H0
  double overhead_packed = 0;      // bits_packed / bound_info_bits
  double overhead_entropy = 0;     // bits_entropy / bound_entropy_bits
};

// Level-order serialization of a proper leaf-labeled trie: a structure
// bitstring (1 = leaf) and the leaf labels, both behind rank/access
// indexes, with longest-prefix match running on the pair directly.
class XbwTransform {
 public:
  XbwTransform() = default;

  // The input must satisfy P1/P2 (leaf_push at barrier 0); anything else
  // is rejected rather than normalized here.
  static XbwTransform build(const Trie& trie,
                            LabelMode mode = LabelMode::entropy);

  Label lookup(uint32_t addr) const;
  Label lookup_counted(uint32_t addr, uint32_t* si_touches) const;

  uint32_t width() const { return width_; }
  uint32_t delta() const { return delta_; }
  uint64_t node_count() const { return t_; }
  uint64_t leaf_count() const { return n_; }
  const BitVector& structure() const { return s_i_; }
  const LabelSequence& labels() const { return s_alpha_; }
  uint64_t build_visits() const { return build_visits_; }

  XbwSizeReport size_report() const;

  uint64_t measured_bits() const;
  void serialize(ByteWriter& w) const;
  static XbwTransform deserialize(ByteReader& r);
  bool operator==(const XbwTransform& o) const;

 private:
  BitVector s_i_;
  LabelSequence s_alpha_;
  uint32_t width_ = 0;
  uint32_t delta_ = 0;
  uint64_t t_ = 0;
  uint64_t n_ = 0;
  uint64_t build_visits_ = 0;
};

// The update story for this structure: rebuild from scratch, O(n).
XbwTransform xbw_rebuild(const FibTable& fib,
                         LabelMode mode = LabelMode::entropy);

// Test oracle hook: reconstruct the trie from the transform by inverse
// breadth-first decoding.
Trie xbw_decode(const XbwTransform& x);

}  // namespace fibc

#endif  // FIBC_XBW_HPP
