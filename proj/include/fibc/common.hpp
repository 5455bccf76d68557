#ifndef FIBC_COMMON_HPP
#define FIBC_COMMON_HPP

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibc {

// Next-hop labels are small integers in [1, delta]. Two reserved values:
//  - kBot (0) is the invalid label that marks uncovered leaves after
//    leaf-pushing; lookups translate it to "no route".
//  - kNoLabel means a node carries no label at all.
using Label = uint32_t;
inline constexpr Label kBot = 0;
inline constexpr Label kNoLabel = 0xFFFFFFFFu;

// A prefix of `len` bits stored in the top bits of a W-bit value; the W
// below position len is zero (canonical padding). W lives on the table.
struct Prefix {
  uint32_t bits = 0;
  uint32_t len = 0;

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

// Sort key used everywhere a canonical entry order is needed.
inline bool prefix_less(const Prefix& a, const Prefix& b) {
  if (a.len != b.len) return a.len < b.len;
  return a.bits < b.bits;
}

inline bool prefix_matches(const Prefix& p, uint32_t addr, uint32_t width) {
  if (p.len == 0) return true;
  return ((addr ^ p.bits) >> (width - p.len)) == 0;
}

// Bit q of a W-bit address, counting from the MSB (q = 0 is the first bit
// consumed by a trie walk).
inline uint32_t addr_bit(uint32_t addr, uint32_t q, uint32_t width) {
  return (addr >> (width - 1 - q)) & 1u;
}

inline uint32_t ceil_log2(uint64_t x) {
  uint32_t r = 0;
  while ((uint64_t{1} << r) < x) ++r;
  return r;
}

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian byte sink/source for the serialized blob formats.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
  }
  void f64(double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    u64(u);
  }
  void words(const std::vector<uint64_t>& ws) {
    for (uint64_t w : ws) u64(w);
  }
  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<uint8_t>& v)
      : data_(v.data()), size_(v.size()) {}

  uint8_t u8() { return data_[need(1)]; }
  uint32_t u32() {
    size_t at = need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(data_[at + i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    size_t at = need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(data_[at + i]) << (8 * i);
    return v;
  }
  double f64() {
    uint64_t u = u64();
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
  std::vector<uint64_t> words(size_t n) {
    std::vector<uint64_t> ws(n);
    for (size_t i = 0; i < n; ++i) ws[i] = u64();
    return ws;
  }
  bool done() const { return pos_ == size_; }
  size_t remaining() const { return size_ - pos_; }

 private:
  size_t need(size_t n) {
    if (size_ - pos_ < n) throw FormatError("truncated blob");
    size_t at = pos_;
    pos_ += n;
    return at;
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

inline uint32_t fourcc(const char (&s)[5]) {
  return uint32_t(uint8_t(s[0])) | uint32_t(uint8_t(s[1])) << 8 |
         uint32_t(uint8_t(s[2])) << 16 | uint32_t(uint8_t(s[3])) << 24;
}

}  // namespace fibc

#endif  // FIBC_COMMON_HPP
