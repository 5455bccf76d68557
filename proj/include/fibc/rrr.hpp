#ifndef FIBC_RRR_HPP
#define FIBC_RRR_HPP

#include <cstdint>
#include <vector>

#include "fibc/bitvector.hpp"

namespace fibc {

// Block-compressed bitvector: 63-bit blocks stored as a 6-bit class
// (popcount) plus an enumerative offset of ceil(log2 C(63, class)) bits,
// with rank/position samples every 32 blocks. Dense around p = 1/2 it
// costs about one bit per bit; skewed content approaches n*h(p).
class RrrVector {
 public:
  RrrVector() = default;
  static RrrVector from_bits(const std::vector<bool>& bits);
  static RrrVector from_words(const std::vector<uint64_t>& words,
                              uint64_t length);

  uint64_t size() const { return len_; }
  uint64_t ones() const { return ones_; }

  uint32_t access(uint64_t q) const;  // q in [1, len]
  uint64_t rank1(uint64_t q) const;   // q in [0, len]
  uint64_t rank0(uint64_t q) const;
  uint64_t select1(uint64_t k) const;
  uint64_t select0(uint64_t k) const;

  SizeBits size_bits() const;
  bool operator==(const RrrVector& o) const {
    return len_ == o.len_ && classes_ == o.classes_ && offsets_ == o.offsets_;
  }

  void serialize(ByteWriter& w) const;
  static RrrVector deserialize(ByteReader& r);

 private:
  void build_samples();
  uint64_t decode_block(uint64_t b) const;
  uint32_t class_of(uint64_t b) const;

  uint64_t len_ = 0;
  uint64_t ones_ = 0;
  uint64_t offset_len_ = 0;            // used bits in offsets_
  std::vector<uint64_t> classes_;      // 6-bit packed block classes
  std::vector<uint64_t> offsets_;      // variable-width packed offsets
  struct Sample {
    uint64_t rank;     // ones before the sampled block
    uint64_t off_bit;  // offset-stream bit position of the sampled block
  };
  std::vector<Sample> samples_;
};

}  // namespace fibc

#endif  // FIBC_RRR_HPP
