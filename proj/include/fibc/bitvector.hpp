#ifndef FIBC_BITVECTOR_HPP
#define FIBC_BITVECTOR_HPP

#include <cstdint>
#include <vector>

#include "fibc/common.hpp"

namespace fibc {

struct SizeBits {
  uint64_t payload = 0;    // logical data bits
  uint64_t directory = 0;  // rank/select acceleration
  uint64_t total = 0;      // allocated payload + directory
};

// Plain bitvector with a two-level rank directory: absolute counts per
// superblock (8 blocks) plus 16-bit relative counts per block, popcount
// inside a word. Positions are 1-indexed and rank is inclusive, so
// rank1(q) counts ones in positions [1, q] and rank1(0) = 0.
class BitVector {
 public:
  BitVector() = default;
  BitVector(std::vector<uint64_t> words, uint64_t length,
            uint32_t block_bits = 512);

  static BitVector from_bits(const std::vector<bool>& bits,
                             uint32_t block_bits = 512);

  uint64_t size() const { return len_; }
  uint64_t ones() const { return ones_; }

  uint32_t access(uint64_t q) const;  // q in [1, len]
  uint64_t rank1(uint64_t q) const;   // q in [0, len]
  uint64_t rank0(uint64_t q) const { return check_rank(q) - rank1(q); }
  uint64_t select1(uint64_t k) const;  // k in [1, ones]
  uint64_t select0(uint64_t k) const;  // k in [1, len - ones]

  SizeBits size_bits() const;
  bool operator==(const BitVector& o) const {
    return len_ == o.len_ && words_ == o.words_;
  }

  void serialize(ByteWriter& w) const;
  static BitVector deserialize(ByteReader& r);

  const std::vector<uint64_t>& words() const { return words_; }

 private:
  uint64_t check_rank(uint64_t q) const;
  void build_directory();

  std::vector<uint64_t> words_;
  uint64_t len_ = 0;
  uint64_t ones_ = 0;
  uint32_t block_bits_ = 512;
  std::vector<uint64_t> super_;   // ones before each superblock
  std::vector<uint16_t> block_;   // ones before each block, within superblock
};

}  // namespace fibc

#endif  // FIBC_BITVECTOR_HPP
