#ifndef FIBC_LABELSEQ_HPP
#define FIBC_LABELSEQ_HPP

#include <cstdint>
#include <vector>

#include "fibc/rrr.hpp"

namespace fibc {

enum class LabelMode : uint32_t { packed = 0, entropy = 1 };

// Sequence of symbols from a closed alphabet [lo, hi] with positional
// access, per-symbol rank/select, and exact size accounting. Two layouts:
//  - packed: fixed ceil(log2(hi-lo+1)) bits per symbol;
//  - entropy: Huffman-shaped wavelet tree whose node bitvectors are
//    RRR-compressed, landing near n*H0 + o(n) bits.
class LabelSequence {
 public:
  LabelSequence() = default;
  static LabelSequence build(const std::vector<uint32_t>& symbols,
                             uint32_t lo, uint32_t hi, LabelMode mode);

  uint64_t size() const { return n_; }
  LabelMode mode() const { return mode_; }
  uint32_t lo() const { return lo_; }
  uint32_t hi() const { return hi_; }

  uint32_t access(uint64_t q) const;               // q in [1, n]
  uint64_t rank(uint32_t symbol, uint64_t q) const;  // occurrences in [1, q]
  uint64_t select(uint32_t symbol, uint64_t k) const;

  SizeBits size_bits() const;
  void serialize(ByteWriter& w) const;
  static LabelSequence deserialize(ByteReader& r);
  bool operator==(const LabelSequence& o) const;

 private:
  struct WaveletNode {
    int32_t child[2] = {-1, -1};     // < 0: leaf encoding ~symbol
    RrrVector bits;
  };

  void build_codes();
  uint64_t count_of(uint32_t symbol) const;

  LabelMode mode_ = LabelMode::packed;
  uint64_t n_ = 0;
  uint32_t lo_ = 0, hi_ = 0;

  // packed layout
  uint32_t width_ = 0;
  std::vector<uint64_t> words_;

  // entropy layout
  std::vector<uint64_t> counts_;           // per symbol in [lo, hi]
  std::vector<WaveletNode> wavelet_;       // [0] is the root when present
  std::vector<std::vector<uint8_t>> code_;     // per symbol bit path
  std::vector<std::vector<int32_t>> path_;     // per symbol node path
  uint32_t single_symbol_ = 0;             // degenerate one-symbol alphabet
  bool degenerate_ = false;
};

}  // namespace fibc

#endif  // FIBC_LABELSEQ_HPP
