#include "fibc/labelseq.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace fibc {

namespace {

constexpr uint32_t kLseqVersion = 1;

void append_packed(std::vector<uint64_t>& buf, uint64_t index, uint64_t value,
                   uint32_t width) {
  uint64_t at = index * width;
  uint64_t word = at / 64, shift = at % 64;
  buf[word] |= value << shift;
  if (shift + width > 64) buf[word + 1] |= value >> (64 - shift);
}

uint64_t read_packed(const std::vector<uint64_t>& buf, uint64_t index,
                     uint32_t width) {
  uint64_t at = index * width;
  uint64_t word = at / 64, shift = at % 64;
  uint64_t v = buf[word] >> shift;
  if (shift + width > 64) v |= buf[word + 1] << (64 - shift);
  return v & (width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1);
}

}  // namespace

// Rebuilds the Huffman shape, per-symbol codes, and node paths from counts_.
// Ties merge the two lowest-frequency nodes with the smaller creation order
// first, leaves created in symbol order, so the shape is deterministic.
void LabelSequence::build_codes() {
  wavelet_.clear();
  code_.assign(counts_.size(), {});
  path_.assign(counts_.size(), {});
  degenerate_ = false;

  std::vector<uint32_t> present;
  for (uint32_t i = 0; i < counts_.size(); ++i)
    if (counts_[i]) present.push_back(i);
  if (present.empty())
    throw std::invalid_argument("label sequence needs at least one symbol");
  if (present.size() == 1) {
    degenerate_ = true;
    single_symbol_ = lo_ + present[0];
    return;
  }

  struct Tmp {
    uint64_t freq;
    int32_t child[2];  // >= 0: tmp index; < 0: leaf with symbol ~child
  };
  std::vector<Tmp> tmp;
  using Item = std::pair<std::pair<uint64_t, uint64_t>, int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  uint64_t order = 0;
  for (uint32_t s : present)
    heap.push({{counts_[s], order++}, ~int32_t(s)});
  while (heap.size() > 1) {
    auto a = heap.top();
    heap.pop();
    auto b = heap.top();
    heap.pop();
    tmp.push_back({a.first.first + b.first.first, {a.second, b.second}});
    heap.push({{tmp.back().freq, order++}, int32_t(tmp.size() - 1)});
  }

  // Renumber internals in BFS order from the root so node 0 is the root and
  // serialization order is content-determined.
  int32_t root_tmp = heap.top().second;
  std::vector<int32_t> bfs{root_tmp};
  std::vector<int32_t> renumber(tmp.size(), -1);
  for (size_t i = 0; i < bfs.size(); ++i) {
    renumber[size_t(bfs[i])] = int32_t(i);
    for (int side = 0; side < 2; ++side) {
      int32_t c = tmp[size_t(bfs[i])].child[side];
      if (c >= 0) bfs.push_back(c);
    }
  }
  wavelet_.assign(tmp.size(), {});
  for (size_t i = 0; i < bfs.size(); ++i) {
    const Tmp& t = tmp[size_t(bfs[i])];
    for (int side = 0; side < 2; ++side)
      wavelet_[i].child[side] =
          t.child[side] >= 0 ? renumber[size_t(t.child[side])] : t.child[side];
  }

  // Per-symbol code bits and the wavelet nodes visited along them.
  std::vector<std::pair<int32_t, std::pair<std::vector<uint8_t>,
                                           std::vector<int32_t>>>>
      stack;
  stack.push_back({0, {{}, {}}});
  while (!stack.empty()) {
    auto [node, trail] = std::move(stack.back());
    stack.pop_back();
    for (int side = 0; side < 2; ++side) {
      auto bits = trail.first;
      auto nodes = trail.second;
      bits.push_back(uint8_t(side));
      nodes.push_back(node);
      int32_t c = wavelet_[size_t(node)].child[side];
      if (c < 0) {
        code_[size_t(~c)] = std::move(bits);
        path_[size_t(~c)] = std::move(nodes);
      } else {
        stack.push_back({c, {std::move(bits), std::move(nodes)}});
      }
    }
  }
}

LabelSequence LabelSequence::build(const std::vector<uint32_t>& symbols,
                                   uint32_t lo, uint32_t hi, LabelMode mode) {
  if (symbols.empty())
    throw std::invalid_argument("label sequence needs at least one symbol");
  if (lo > hi) throw std::invalid_argument("bad alphabet range");
  LabelSequence s;
  s.mode_ = mode;
  s.n_ = symbols.size();
  s.lo_ = lo;
  s.hi_ = hi;
  for (uint32_t v : symbols)
    if (v < lo || v > hi)
      throw std::invalid_argument("symbol outside declared alphabet");

  if (mode == LabelMode::packed) {
    s.width_ = ceil_log2(uint64_t(hi) - lo + 1);
    s.words_.assign((s.n_ * s.width_ + 63) / 64 + 1, 0);
    for (uint64_t i = 0; i < s.n_; ++i)
      append_packed(s.words_, i, symbols[i] - lo, s.width_);
    return s;
  }

  s.counts_.assign(size_t(hi) - lo + 1, 0);
  for (uint32_t v : symbols) ++s.counts_[v - lo];
  s.build_codes();
  if (s.degenerate_) return s;

  std::vector<std::vector<bool>> node_bits(s.wavelet_.size());
  for (uint32_t v : symbols) {
    uint32_t idx = v - lo;
    const auto& bits = s.code_[idx];
    const auto& nodes = s.path_[idx];
    for (size_t d = 0; d < bits.size(); ++d)
      node_bits[size_t(nodes[d])].push_back(bits[d]);
  }
  for (size_t i = 0; i < s.wavelet_.size(); ++i)
    s.wavelet_[i].bits = RrrVector::from_bits(node_bits[i]);
  return s;
}

uint32_t LabelSequence::access(uint64_t q) const {
  if (q < 1 || q > n_) throw std::out_of_range("label sequence access");
  if (mode_ == LabelMode::packed)
    return lo_ + uint32_t(read_packed(words_, q - 1, width_));
  if (degenerate_) return single_symbol_;
  int32_t node = 0;
  for (;;) {
    const WaveletNode& w = wavelet_[size_t(node)];
    uint32_t bit = w.bits.access(q);
    q = bit ? w.bits.rank1(q) : q - w.bits.rank1(q);
    int32_t c = w.child[bit];
    if (c < 0) return lo_ + uint32_t(~c);
    node = c;
  }
}

uint64_t LabelSequence::count_of(uint32_t symbol) const {
  if (symbol < lo_ || symbol > hi_) return 0;
  if (mode_ == LabelMode::packed) {
    uint64_t c = 0;
    for (uint64_t i = 0; i < n_; ++i)
      if (lo_ + uint32_t(read_packed(words_, i, width_)) == symbol) ++c;
    return c;
  }
  return counts_[symbol - lo_];
}

uint64_t LabelSequence::rank(uint32_t symbol, uint64_t q) const {
  if (q > n_) throw std::out_of_range("label sequence rank");
  if (symbol < lo_ || symbol > hi_ || q == 0) return 0;
  if (mode_ == LabelMode::packed) {
    uint64_t c = 0;
    for (uint64_t i = 0; i < q; ++i)
      if (lo_ + uint32_t(read_packed(words_, i, width_)) == symbol) ++c;
    return c;
  }
  if (degenerate_) return symbol == single_symbol_ ? q : 0;
  uint32_t idx = symbol - lo_;
  if (!counts_[idx]) return 0;
  const auto& bits = code_[idx];
  const auto& nodes = path_[idx];
  for (size_t d = 0; d < bits.size() && q; ++d) {
    const RrrVector& bv = wavelet_[size_t(nodes[d])].bits;
    q = bits[d] ? bv.rank1(q) : bv.rank0(q);
  }
  return q;
}

uint64_t LabelSequence::select(uint32_t symbol, uint64_t k) const {
  if (k < 1 || k > count_of(symbol))
    throw std::out_of_range("label sequence select");
  if (mode_ == LabelMode::packed) {
    for (uint64_t i = 0; i < n_; ++i)
      if (lo_ + uint32_t(read_packed(words_, i, width_)) == symbol)
        if (--k == 0) return i + 1;
    throw std::out_of_range("label sequence select");
  }
  if (degenerate_) return k;
  uint32_t idx = symbol - lo_;
  const auto& bits = code_[idx];
  const auto& nodes = path_[idx];
  uint64_t pos = k;
  for (size_t d = bits.size(); d-- > 0;) {
    const RrrVector& bv = wavelet_[size_t(nodes[d])].bits;
    pos = bits[d] ? bv.select1(pos) : bv.select0(pos);
  }
  return pos;
}

SizeBits LabelSequence::size_bits() const {
  SizeBits s;
  if (mode_ == LabelMode::packed) {
    s.payload = n_ * width_;
    s.directory = 0;
    s.total = words_.size() * 64;
    return s;
  }
  s.directory = counts_.size() * 64;  // symbol table
  for (const WaveletNode& w : wavelet_) {
    if (degenerate_) break;
    SizeBits nb = w.bits.size_bits();
    s.payload += nb.payload;
    s.directory += nb.directory;
    s.total += nb.total;
  }
  s.total += counts_.size() * 64;
  return s;
}

void LabelSequence::serialize(ByteWriter& w) const {
  w.u32(fourcc("LSEQ"));
  w.u32(kLseqVersion);
  w.u32(uint32_t(mode_));
  w.u64(n_);
  w.u32(lo_);
  w.u32(hi_);
  if (mode_ == LabelMode::packed) {
    w.u32(width_);
    w.u64(words_.size());
    w.words(words_);
    return;
  }
  w.words(counts_);
  if (!degenerate_)
    for (const WaveletNode& n : wavelet_) n.bits.serialize(w);
}

LabelSequence LabelSequence::deserialize(ByteReader& r) {
  if (r.u32() != fourcc("LSEQ")) throw FormatError("bad label sequence magic");
  if (r.u32() != kLseqVersion)
    throw FormatError("unsupported label sequence version");
  LabelSequence s;
  s.mode_ = LabelMode(r.u32());
  s.n_ = r.u64();
  s.lo_ = r.u32();
  s.hi_ = r.u32();
  if (s.lo_ > s.hi_) throw FormatError("bad alphabet range");
  if (s.mode_ == LabelMode::packed) {
    s.width_ = r.u32();
    s.words_ = r.words(r.u64());
    return s;
  }
  if (s.mode_ != LabelMode::entropy) throw FormatError("bad label mode");
  s.counts_ = r.words(size_t(s.hi_) - s.lo_ + 1);
  uint64_t total = 0;
  for (uint64_t c : s.counts_) total += c;
  if (total != s.n_) throw FormatError("label counts disagree with length");
  s.build_codes();
  if (!s.degenerate_)
    for (auto& n : s.wavelet_) n.bits = RrrVector::deserialize(r);
  return s;
}

bool LabelSequence::operator==(const LabelSequence& o) const {
  if (mode_ != o.mode_ || n_ != o.n_ || lo_ != o.lo_ || hi_ != o.hi_)
    return false;
  if (mode_ == LabelMode::packed) return words_ == o.words_;
  if (counts_ != o.counts_) return false;
  for (size_t i = 0; i < wavelet_.size(); ++i)
    if (!(wavelet_[i].bits == o.wavelet_[i].bits)) return false;
  return true;
}

}  // namespace fibc
