#include "fibc/xbw.hpp"

#include <deque>
#include <stdexcept>

#include "fibc/entropy.hpp"

namespace fibc {

namespace {
constexpr uint32_t kXbwVersion = 1;
}

XbwTransform XbwTransform::build(const Trie& trie, LabelMode mode) {
  if (!is_proper_leaf_labeled(trie))
    throw std::invalid_argument(
        "xbw input must be a proper leaf-labeled trie (leaf_push at 0)");
  XbwTransform x;
  x.width_ = trie.width();

  // Single breadth-first pass fills both strings; the visit counter backs
  // the O(t) construction claim in tests.
  std::vector<bool> s_i;
  std::vector<uint32_t> s_alpha;
  s_i.reserve(trie.node_count());
  std::deque<int32_t> queue{trie.root()};
  bool any_bot = false;
  uint32_t max_label = 0;
  while (!queue.empty()) {
    int32_t v = queue.front();
    queue.pop_front();
    ++x.build_visits_;
    if (trie.is_leaf(v)) {
      s_i.push_back(true);
      Label lab = trie.node(v).label;
      s_alpha.push_back(lab);
      if (lab == kBot)
        any_bot = true;
      else
        max_label = std::max(max_label, lab);
    } else {
      s_i.push_back(false);
      queue.push_back(trie.node(v).left);
      queue.push_back(trie.node(v).right);
    }
  }
  x.t_ = s_i.size();
  x.n_ = s_alpha.size();
  if (x.t_ != 2 * x.n_ - 1)
    throw std::logic_error("proper trie must satisfy t = 2n - 1");
  x.delta_ = max_label;
  x.s_i_ = BitVector::from_bits(s_i);
  uint32_t lo = any_bot ? kBot : 1;
  if (max_label == 0) max_label = lo;  // all-bot corner (uncovered table)
  x.s_alpha_ = LabelSequence::build(s_alpha, lo, max_label, mode);
  return x;
}

Label XbwTransform::lookup(uint32_t addr) const {
  uint32_t touches = 0;
  return lookup_counted(addr, &touches);
}

Label XbwTransform::lookup_counted(uint32_t addr, uint32_t* si_touches) const {
  // i indexes S_I one-based; the children of the r-th interior node (in
  // level order) start at position 2r. The node reached after consuming all
  // W bits is necessarily a leaf in a proper trie of depth <= W.
  uint64_t i = 1;
  uint32_t q = 0;
  uint32_t touches = 0;
  Label out = kBot;
  for (;;) {
    ++touches;
    if (s_i_.access(i) == 1) {
      out = Label(s_alpha_.access(s_i_.rank1(i)));
      break;
    }
    if (q >= width_)
      throw std::logic_error("xbw walk ran past the key width");
    uint64_t r = s_i_.rank0(i);
    uint64_t f = 2 * r;
    i = f + addr_bit(addr, q, width_);
    ++q;
  }
  *si_touches = touches;
  return out == kBot ? kBot : out;
}

XbwSizeReport XbwTransform::size_report() const {
  XbwSizeReport r;
  r.n = n_;
  r.t = t_;
  r.delta = delta_;

  // Re-extract the labels to measure both encodings of S_alpha.
  std::vector<uint32_t> syms(n_);
  std::map<Label, uint64_t> hist;
  for (uint64_t j = 1; j <= n_; ++j) {
    syms[j - 1] = s_alpha_.access(j);
    ++hist[syms[j - 1]];
  }
  LabelSequence packed =
      LabelSequence::build(syms, s_alpha_.lo(), s_alpha_.hi(),
                           LabelMode::packed);
  LabelSequence coded =
      LabelSequence::build(syms, s_alpha_.lo(), s_alpha_.hi(),
                           LabelMode::entropy);
  uint64_t si_bits = s_i_.size_bits().total;
  r.bits_packed = si_bits + packed.size_bits().total;
  r.bits_entropy = si_bits + coded.size_bits().total;
  r.h0 = shannon_entropy(hist);
  r.bound_info_bits =
      info_theoretic_bound_bits(n_, std::max<uint64_t>(1, delta_));
  r.bound_entropy_bits = fib_entropy_bits(n_, r.h0);
  r.overhead_packed = double(r.bits_packed) / double(r.bound_info_bits);
  r.overhead_entropy = double(r.bits_entropy) / r.bound_entropy_bits;
  return r;
}

uint64_t XbwTransform::measured_bits() const {
  return s_i_.size_bits().total + s_alpha_.size_bits().total;
}

void XbwTransform::serialize(ByteWriter& w) const {
  w.u32(fourcc("XBWB"));
  w.u32(kXbwVersion);
  w.u32(width_);
  w.u32(delta_);
  w.u64(t_);
  w.u64(n_);
  s_i_.serialize(w);
  s_alpha_.serialize(w);
}

XbwTransform XbwTransform::deserialize(ByteReader& r) {
  if (r.u32() != fourcc("XBWB")) throw FormatError("bad xbwb magic");
  if (r.u32() != kXbwVersion) throw FormatError("unsupported xbwb version");
  XbwTransform x;
  x.width_ = r.u32();
  x.delta_ = r.u32();
  x.t_ = r.u64();
  x.n_ = r.u64();
  x.s_i_ = BitVector::deserialize(r);
  x.s_alpha_ = LabelSequence::deserialize(r);
  if (x.s_i_.size() != x.t_ || x.s_alpha_.size() != x.n_ ||
      x.s_i_.ones() != x.n_)
    throw FormatError("xbwb header disagrees with payload");
  return x;
}

bool XbwTransform::operator==(const XbwTransform& o) const {
  return width_ == o.width_ && delta_ == o.delta_ && t_ == o.t_ &&
         n_ == o.n_ && s_i_ == o.s_i_ && s_alpha_ == o.s_alpha_;
}

XbwTransform xbw_rebuild(const FibTable& fib, LabelMode mode) {
  return XbwTransform::build(leaf_push(build_trie(fib), 0), mode);
}

Trie xbw_decode(const XbwTransform& x) {
  // Inverse breadth-first decoding: position 1 is the root; the children of
  // the r-th interior position are positions 2r and 2r+1.
  Trie t(x.width());
  uint64_t tn = x.node_count();
  std::vector<int32_t> at(tn + 1, -1);
  at[1] = t.root();
  for (uint64_t i = 1; i <= tn; ++i) {
    if (at[i] < 0) throw FormatError("xbw decode: unreachable position");
    if (x.structure().access(i) == 1) {
      Label lab = Label(x.labels().access(x.structure().rank1(i)));
      t.node(at[i]).label = lab;
    } else {
      uint64_t r = x.structure().rank0(i);
      int32_t l = t.add_node(), rr = t.add_node();
      t.node(at[i]).left = l;
      t.node(at[i]).right = rr;
      at[2 * r] = l;
      at[2 * r + 1] = rr;
    }
  }
  t.set_normalized(true);
  return t;
}

}  // namespace fibc
