#include "fibc/rrr.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace fibc {

namespace {

constexpr uint32_t kBlock = 63;
constexpr uint32_t kSampleRate = 32;  // blocks per sample
constexpr uint32_t kRrrVersion = 1;

struct Tables {
  // binom[n][k] for n <= 63; offset_width[k] = bits for values < C(63, k).
  std::array<std::array<uint64_t, kBlock + 1>, kBlock + 1> binom{};
  std::array<uint32_t, kBlock + 1> offset_width{};

  Tables() {
    for (uint32_t n = 0; n <= kBlock; ++n) {
      binom[n][0] = 1;
      for (uint32_t k = 1; k <= n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
    }
    for (uint32_t k = 0; k <= kBlock; ++k) {
      uint64_t count = binom[kBlock][k];
      uint32_t w = 0;
      while ((uint64_t{1} << w) < count) ++w;
      offset_width[k] = w;
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

// Enumerative index of a 63-bit block among all words of its popcount.
uint64_t encode_offset(uint64_t word) {
  const auto& tb = tables();
  uint64_t off = 0;
  uint32_t seen = 0;
  for (uint32_t p = 0; p < kBlock; ++p)
    if (word & (uint64_t{1} << p)) off += tb.binom[p][++seen];
  return off;
}

uint64_t decode_offset(uint64_t off, uint32_t klass) {
  const auto& tb = tables();
  uint64_t word = 0;
  uint32_t p = kBlock - 1;
  for (uint32_t j = klass; j >= 1; --j) {
    while (tb.binom[p][j] > off) --p;
    word |= uint64_t{1} << p;
    off -= tb.binom[p][j];
    if (p) --p;
  }
  return word;
}

void append_bits(std::vector<uint64_t>& buf, uint64_t& used, uint64_t value,
                 uint32_t width) {
  if (!width) return;
  uint64_t word = used / 64, shift = used % 64;
  uint64_t need = (used + width + 63) / 64;
  if (buf.size() < need) buf.resize(need, 0);
  buf[word] |= value << shift;
  if (shift + width > 64) buf[word + 1] |= value >> (64 - shift);
  used += width;
}

uint64_t read_bits(const std::vector<uint64_t>& buf, uint64_t at,
                   uint32_t width) {
  if (!width) return 0;
  uint64_t word = at / 64, shift = at % 64;
  uint64_t v = buf[word] >> shift;
  if (shift + width > 64) v |= buf[word + 1] << (64 - shift);
  return v & (width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1);
}

}  // namespace

RrrVector RrrVector::from_bits(const std::vector<bool>& bits) {
  std::vector<uint64_t> words((bits.size() + 63) / 64, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) words[i / 64] |= uint64_t{1} << (i % 64);
  return from_words(words, bits.size());
}

RrrVector RrrVector::from_words(const std::vector<uint64_t>& words,
                                uint64_t length) {
  RrrVector v;
  v.len_ = length;
  uint64_t nblocks = (length + kBlock - 1) / kBlock;
  v.classes_.assign((nblocks * 6 + 63) / 64, 0);
  uint64_t class_used = 0;
  const auto& tb = tables();
  for (uint64_t b = 0; b < nblocks; ++b) {
    uint64_t lo = b * kBlock;
    uint64_t block = 0;
    for (uint32_t i = 0; i < kBlock && lo + i < length; ++i) {
      uint64_t bit = (words[(lo + i) / 64] >> ((lo + i) % 64)) & 1u;
      block |= bit << i;
    }
    uint32_t klass = uint32_t(std::popcount(block));
    append_bits(v.classes_, class_used, klass, 6);
    append_bits(v.offsets_, v.offset_len_, encode_offset(block),
                tb.offset_width[klass]);
    v.ones_ += klass;
  }
  if (v.offsets_.empty()) v.offsets_.push_back(0);
  v.build_samples();
  return v;
}

uint32_t RrrVector::class_of(uint64_t b) const {
  return uint32_t(read_bits(classes_, b * 6, 6));
}

void RrrVector::build_samples() {
  uint64_t nblocks = (len_ + kBlock - 1) / kBlock;
  samples_.clear();
  const auto& tb = tables();
  uint64_t rank = 0, off = 0;
  for (uint64_t b = 0; b < nblocks; ++b) {
    if (b % kSampleRate == 0) samples_.push_back({rank, off});
    uint32_t k = class_of(b);
    rank += k;
    off += tb.offset_width[k];
  }
  samples_.push_back({rank, off});
}

uint64_t RrrVector::decode_block(uint64_t b) const {
  const auto& tb = tables();
  uint64_t s = b / kSampleRate;
  uint64_t off_at = samples_[s].off_bit;
  for (uint64_t j = s * kSampleRate; j < b; ++j)
    off_at += tb.offset_width[class_of(j)];
  uint32_t klass = class_of(b);
  uint64_t off = read_bits(offsets_, off_at, tb.offset_width[klass]);
  return decode_offset(off, klass);
}

uint32_t RrrVector::access(uint64_t q) const {
  if (q < 1 || q > len_) throw std::out_of_range("rrr access");
  uint64_t i = q - 1;
  return uint32_t((decode_block(i / kBlock) >> (i % kBlock)) & 1u);
}

uint64_t RrrVector::rank1(uint64_t q) const {
  if (q > len_) throw std::out_of_range("rrr rank");
  if (q == 0) return 0;
  uint64_t b = q / kBlock, rem = q % kBlock;
  uint64_t s = b / kSampleRate;
  uint64_t rank = samples_[s].rank;
  for (uint64_t j = s * kSampleRate; j < b; ++j) rank += class_of(j);
  if (rem) {
    uint64_t block = decode_block(b);
    rank += uint64_t(std::popcount(block & ((uint64_t{1} << rem) - 1)));
  }
  return rank;
}

uint64_t RrrVector::rank0(uint64_t q) const { return q - rank1(q); }

uint64_t RrrVector::select1(uint64_t k) const {
  if (k < 1 || k > ones_) throw std::out_of_range("rrr select1");
  // Sample search, then linear class scan, then in-block decode.
  uint64_t lo = 0, hi = samples_.size() - 1;
  while (lo + 1 < hi) {
    uint64_t mid = (lo + hi) / 2;
    (samples_[mid].rank < k ? lo : hi) = mid;
  }
  uint64_t b = lo * kSampleRate;
  uint64_t rank = samples_[lo].rank;
  for (;; ++b) {
    uint32_t c = class_of(b);
    if (rank + c >= k) break;
    rank += c;
  }
  uint64_t block = decode_block(b);
  for (uint32_t i = 0;; ++i)
    if (block & (uint64_t{1} << i))
      if (++rank == k) return b * kBlock + i + 1;
}

uint64_t RrrVector::select0(uint64_t k) const {
  if (k < 1 || k > len_ - ones_) throw std::out_of_range("rrr select0");
  uint64_t lo = 0, hi = samples_.size() - 1;
  auto zeros_before = [&](uint64_t s) {
    uint64_t pos = std::min<uint64_t>(s * kSampleRate * kBlock, len_);
    return pos - samples_[s].rank;
  };
  while (lo + 1 < hi) {
    uint64_t mid = (lo + hi) / 2;
    (zeros_before(mid) < k ? lo : hi) = mid;
  }
  uint64_t b = lo * kSampleRate;
  uint64_t zeros = zeros_before(lo);
  for (;; ++b) {
    uint64_t bits_here = std::min<uint64_t>(kBlock, len_ - b * kBlock);
    uint64_t z = bits_here - class_of(b);
    if (zeros + z >= k) break;
    zeros += z;
  }
  uint64_t block = decode_block(b);
  for (uint32_t i = 0;; ++i)
    if (!(block & (uint64_t{1} << i)))
      if (++zeros == k) return b * kBlock + i + 1;
}

SizeBits RrrVector::size_bits() const {
  SizeBits s;
  uint64_t nblocks = (len_ + kBlock - 1) / kBlock;
  s.payload = nblocks * 6 + offset_len_;
  s.directory = samples_.size() * 128;
  s.total = classes_.size() * 64 + offsets_.size() * 64 + s.directory;
  return s;
}

void RrrVector::serialize(ByteWriter& w) const {
  w.u32(fourcc("RRRV"));
  w.u32(kRrrVersion);
  w.u64(len_);
  w.u64(offset_len_);
  w.u64(classes_.size());
  w.words(classes_);
  w.u64(offsets_.size());
  w.words(offsets_);
}

RrrVector RrrVector::deserialize(ByteReader& r) {
  if (r.u32() != fourcc("RRRV")) throw FormatError("bad rrr magic");
  if (r.u32() != kRrrVersion) throw FormatError("unsupported rrr version");
  RrrVector v;
  v.len_ = r.u64();
  v.offset_len_ = r.u64();
  v.classes_ = r.words(r.u64());
  v.offsets_ = r.words(r.u64());
  uint64_t nblocks = (v.len_ + kBlock - 1) / kBlock;
  if (v.classes_.size() != (nblocks * 6 + 63) / 64)
    throw FormatError("rrr class array size mismatch");
  v.ones_ = 0;
  for (uint64_t b = 0; b < nblocks; ++b) v.ones_ += v.class_of(b);
  v.build_samples();
  return v;
}

}  // namespace fibc
