#ifndef FIBC_FIB_HPP
#define FIBC_FIB_HPP

#include <string>
#include <string_view>
#include <vector>

#include "fibc/common.hpp"

namespace fibc {

struct FibEntry {
  Prefix prefix;
  Label label = kNoLabel;  // dense label in [1, delta]

  friend bool operator==(const FibEntry&, const FibEntry&) = default;
};

// Canonical tabular FIB. Entries are kept sorted by (len, bits); labels are
// remapped to a dense [1, delta] alphabet in ascending source order (the
// identity for tables whose labels already are 1..delta), with the original
// values retained for round-tripping.
class FibTable {
 public:
  FibTable() = default;

  // raw pairs carry the source label values (> 0, never the invalid label).
  static FibTable from_entries(uint32_t width,
                               std::vector<std::pair<Prefix, uint32_t>> raw);
  // Entries already in the dense [1, delta] space; the source map is the
  // identity, so label values survive round trips through this builder.
  static FibTable from_dense_entries(uint32_t width,
                                     std::vector<FibEntry> entries,
                                     uint32_t delta);
  static FibTable parse(std::string_view text, uint32_t default_width = 32);
  std::string serialize() const;

  // Longest-prefix-match ground truth: linear scan of every entry.
  // Returns kBot when nothing matches (not even a default route).
  Label lookup(uint32_t addr) const;

  uint32_t width() const { return width_; }
  uint32_t alphabet_size() const { return delta_; }  // delta
  size_t size() const { return entries_.size(); }    // N
  const std::vector<FibEntry>& entries() const { return entries_; }
  uint32_t source_label(Label dense) const { return source_labels_[dense]; }
  bool contains(const Prefix& p) const;
  Label label_of(const Prefix& p) const;  // kNoLabel if absent

  // Semantic equality: same width and the same prefix -> source-label map.
  bool operator==(const FibTable& o) const;

 private:
  uint32_t width_ = 32;
  uint32_t delta_ = 0;
  std::vector<FibEntry> entries_;          // sorted by (len, bits)
  std::vector<uint32_t> source_labels_;    // dense id -> original label; [0] unused
};

std::string format_prefix(const Prefix& p, uint32_t width);
Prefix parse_prefix(std::string_view text, uint32_t width);

// Address trace helpers: one destination per line, decimal or dotted quad.
std::vector<uint32_t> parse_address_trace(std::string_view text);
uint32_t parse_address(std::string_view token);

}  // namespace fibc

#endif  // FIBC_FIB_HPP
