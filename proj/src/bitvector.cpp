#include "fibc/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace fibc {

namespace {
constexpr uint32_t kBlocksPerSuper = 8;
constexpr uint32_t kBitvMagicVersion = 1;
}  // namespace

BitVector::BitVector(std::vector<uint64_t> words, uint64_t length,
                     uint32_t block_bits)
    : words_(std::move(words)), len_(length), block_bits_(block_bits) {
  if (block_bits_ == 0 || block_bits_ % 64 != 0)
    throw std::invalid_argument("block size must be a positive multiple of 64");
  if (words_.size() * 64 < len_)
    throw std::invalid_argument("word array shorter than declared length");
  words_.resize((len_ + 63) / 64);
  if (len_ % 64) words_.back() &= (uint64_t{1} << (len_ % 64)) - 1;
  build_directory();
}

BitVector BitVector::from_bits(const std::vector<bool>& bits,
                               uint32_t block_bits) {
  std::vector<uint64_t> words((bits.size() + 63) / 64, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) words[i / 64] |= uint64_t{1} << (i % 64);
  return BitVector(std::move(words), bits.size(), block_bits);
}

void BitVector::build_directory() {
  uint64_t words_per_block = block_bits_ / 64;
  uint64_t nblocks = (len_ + block_bits_ - 1) / block_bits_;
  uint64_t nsuper = (nblocks + kBlocksPerSuper - 1) / kBlocksPerSuper;
  super_.assign(nsuper + 1, 0);
  block_.assign(nblocks + 1, 0);
  uint64_t acc = 0, in_super = 0;
  for (uint64_t b = 0; b < nblocks; ++b) {
    if (b % kBlocksPerSuper == 0) {
      super_[b / kBlocksPerSuper] = acc;
      in_super = 0;
    }
    block_[b] = uint16_t(in_super);
    uint64_t w0 = b * words_per_block;
    uint64_t w1 = std::min<uint64_t>(w0 + words_per_block, words_.size());
    for (uint64_t w = w0; w < w1; ++w) {
      uint32_t c = uint32_t(std::popcount(words_[w]));
      acc += c;
      in_super += c;
    }
  }
  super_[nsuper] = acc;
  if (nblocks) block_[nblocks] = uint16_t(in_super);
  ones_ = acc;
}

uint32_t BitVector::access(uint64_t q) const {
  if (q < 1 || q > len_) throw std::out_of_range("bitvector access");
  uint64_t i = q - 1;
  return uint32_t((words_[i / 64] >> (i % 64)) & 1u);
}

uint64_t BitVector::check_rank(uint64_t q) const {
  if (q > len_) throw std::out_of_range("bitvector rank");
  return q;
}

uint64_t BitVector::rank1(uint64_t q) const {
  check_rank(q);
  if (q == 0) return 0;
  uint64_t b = q / block_bits_;
  uint64_t r = super_[b / kBlocksPerSuper] + block_[b];
  uint64_t w0 = b * (block_bits_ / 64);
  uint64_t w = q / 64;
  for (uint64_t i = w0; i < w; ++i) r += uint64_t(std::popcount(words_[i]));
  uint64_t rem = q % 64;
  if (rem && w < words_.size())
    r += uint64_t(std::popcount(words_[w] & ((uint64_t{1} << rem) - 1)));
  return r;
}

namespace {

// Position (0-based) of the k-th set bit in w, k in [1, popcount(w)].
uint32_t select_in_word(uint64_t w, uint32_t k) {
  for (uint32_t i = 0;; ++i) {
    if (w & (uint64_t{1} << i)) {
      if (--k == 0) return i;
    }
  }
}

}  // namespace

uint64_t BitVector::select1(uint64_t k) const {
  if (k < 1 || k > ones_) throw std::out_of_range("bitvector select1");
  // Superblock search on absolute counts, then blocks, then words.
  uint64_t lo = 0, hi = super_.size() - 1;
  while (lo + 1 < hi) {
    uint64_t mid = (lo + hi) / 2;
    (super_[mid] < k ? lo : hi) = mid;
  }
  uint64_t nblocks = block_.size() - 1;
  uint64_t b = lo * kBlocksPerSuper;
  uint64_t bend = std::min<uint64_t>(b + kBlocksPerSuper, nblocks);
  uint64_t base = super_[lo];
  while (b + 1 < bend && base + block_[b + 1] < k) ++b;
  uint64_t r = base + block_[b];
  uint64_t w = b * (block_bits_ / 64);
  for (;; ++w) {
    uint64_t c = uint64_t(std::popcount(words_[w]));
    if (r + c >= k) break;
    r += c;
  }
  return w * 64 + select_in_word(words_[w], uint32_t(k - r)) + 1;
}

uint64_t BitVector::select0(uint64_t k) const {
  if (k < 1 || k > len_ - ones_) throw std::out_of_range("bitvector select0");
  // Zero counts derive from position minus ones count.
  uint64_t lo = 0, hi = super_.size() - 1;
  auto zeros_before_super = [&](uint64_t s) {
    return s * kBlocksPerSuper * block_bits_ >= len_
               ? len_ - super_[s]
               : s * kBlocksPerSuper * block_bits_ - super_[s];
  };
  while (lo + 1 < hi) {
    uint64_t mid = (lo + hi) / 2;
    (zeros_before_super(mid) < k ? lo : hi) = mid;
  }
  uint64_t nblocks = block_.size() - 1;
  uint64_t b = lo * kBlocksPerSuper;
  uint64_t bend = std::min<uint64_t>(b + kBlocksPerSuper, nblocks);
  auto zeros_before_block = [&](uint64_t blk) {
    uint64_t ones = super_[blk / kBlocksPerSuper] + block_[blk];
    return blk * block_bits_ - ones;
  };
  while (b + 1 < bend && zeros_before_block(b + 1) < k) ++b;
  uint64_t r = zeros_before_block(b);
  uint64_t w = b * (block_bits_ / 64);
  for (;; ++w) {
    uint64_t bits_here = std::min<uint64_t>(64, len_ - w * 64);
    uint64_t c = bits_here - uint64_t(std::popcount(words_[w]));
    if (r + c >= k) break;
    r += c;
  }
  return w * 64 + select_in_word(~words_[w], uint32_t(k - r)) + 1;
}

SizeBits BitVector::size_bits() const {
  SizeBits s;
  s.payload = len_;
  s.directory = super_.size() * 64 + block_.size() * 16;
  s.total = words_.size() * 64 + s.directory;
  return s;
}

void BitVector::serialize(ByteWriter& w) const {
  w.u32(fourcc("BITV"));
  w.u32(kBitvMagicVersion);
  w.u64(len_);
  w.u32(block_bits_);
  w.words(words_);
}

BitVector BitVector::deserialize(ByteReader& r) {
  if (r.u32() != fourcc("BITV")) throw FormatError("bad bitvector magic");
  if (r.u32() != kBitvMagicVersion)
    throw FormatError("unsupported bitvector version");
  uint64_t len = r.u64();
  uint32_t block_bits = r.u32();
  auto words = r.words((len + 63) / 64);
  return BitVector(std::move(words), len, block_bits);
}

}  // namespace fibc
