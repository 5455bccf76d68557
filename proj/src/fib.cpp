#include "fibc/fib.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace fibc {

namespace {

bool parse_u32(std::string_view s, uint32_t& out) {
  if (s.empty()) return false;
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v > 0xFFFFFFFFull)
    return false;
  out = uint32_t(v);
  return true;
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

namespace {

// Prefix text -> (bits, len) at the given table width. Accepts "-" (len 0),
// a raw binary string, or a dotted quad (width 32 only).
Prefix parse_prefix_body(std::string_view body, uint32_t len, uint32_t width) {
  Prefix p;
  p.len = len;
  if (len > width) throw ParseError("prefix length exceeds width");
  if (body == "-") {
    if (len != 0) throw ParseError("'-' prefix must have length 0");
    return p;
  }
  if (body.find('.') != std::string_view::npos) {
    if (width != 32)
      throw ParseError("dotted-quad prefix requires a 32-bit table");
    uint32_t parts[4] = {0, 0, 0, 0};
    size_t at = 0;
    for (int i = 0; i < 4; ++i) {
      size_t dot = body.find('.', at);
      std::string_view tok = (i == 3) ? body.substr(at)
                                      : body.substr(at, dot - at);
      if (i < 3 && dot == std::string_view::npos)
        throw ParseError("malformed dotted quad");
      if (!parse_u32(tok, parts[i]) || parts[i] > 255)
        throw ParseError("malformed dotted quad");
      at = dot + 1;
    }
    p.bits = parts[0] << 24 | parts[1] << 16 | parts[2] << 8 | parts[3];
  } else {
    if (body.size() != len)
      throw ParseError("binary prefix length does not match /len");
    p.bits = 0;
    for (char c : body) {
      if (c != '0' && c != '1') throw ParseError("bad binary prefix digit");
      p.bits = (p.bits << 1) | uint32_t(c - '0');
    }
    if (len < width) p.bits <<= (width - len);
  }
  if (len == 0 && p.bits != 0) throw ParseError("length-0 prefix with bits");
  if (len < width && len > 0 && (p.bits & ((uint32_t{1} << (width - len)) - 1)))
    throw ParseError("prefix has nonzero bits below its length");
  return p;
}

std::string format_prefix_at_width(const Prefix& p, uint32_t width) {
  if (p.len == 0) return "-";
  std::string s;
  s.reserve(p.len);
  for (uint32_t i = 0; i < p.len; ++i)
    s.push_back(char('0' + ((p.bits >> (width - 1 - i)) & 1u)));
  return s;
}

}  // namespace

std::string format_prefix(const Prefix& p, uint32_t width) {
  return format_prefix_at_width(p, width) + "/" + std::to_string(p.len);
}

Prefix parse_prefix(std::string_view text, uint32_t width) {
  size_t slash = text.rfind('/');
  if (slash == std::string_view::npos)
    throw ParseError("prefix missing '/len'");
  uint32_t len = 0;
  if (!parse_u32(trim(text.substr(slash + 1)), len))
    throw ParseError("bad prefix length");
  return parse_prefix_body(trim(text.substr(0, slash)), len, width);
}

FibTable FibTable::from_entries(uint32_t width,
                                std::vector<std::pair<Prefix, uint32_t>> raw) {
  if (width == 0 || width > 32) throw ParseError("width must be in [1, 32]");
  FibTable t;
  t.width_ = width;
  // Small-integer label sets pass through verbatim (delta = max value);
  // genuinely sparse ones are compacted in ascending order so that delta
  // does not distort the log2(delta) terms of every size bound.
  std::map<uint32_t, Label> dense;
  uint32_t max_src = 0;
  for (auto& [p, src] : raw) {
    if (p.len > width) throw ParseError("prefix length exceeds width");
    if (src == 0)
      throw ParseError("invalid label: explicit blackhole routes are rejected");
    dense.emplace(src, 0);
    max_src = std::max(max_src, src);
  }
  bool identity = max_src <= 64 || max_src == uint32_t(dense.size());
  t.source_labels_.assign(1, 0);
  if (identity) {
    t.source_labels_.resize(size_t(max_src) + 1);
    for (uint32_t i = 0; i <= max_src; ++i) t.source_labels_[i] = i;
    for (auto& [src, id] : dense) id = src;
  } else {
    for (auto& [src, id] : dense) {
      id = Label(t.source_labels_.size());
      t.source_labels_.push_back(src);
    }
  }
  t.entries_.reserve(raw.size());
  for (auto& [p, src] : raw) t.entries_.push_back({p, dense.at(src)});
  std::sort(t.entries_.begin(), t.entries_.end(),
            [](const FibEntry& a, const FibEntry& b) {
              return prefix_less(a.prefix, b.prefix);
            });
  for (size_t i = 1; i < t.entries_.size(); ++i)
    if (t.entries_[i].prefix == t.entries_[i - 1].prefix)
      throw ParseError("duplicate prefix " +
                       format_prefix_at_width(t.entries_[i].prefix, width) +
                       "/" + std::to_string(t.entries_[i].prefix.len));
  t.delta_ = uint32_t(t.source_labels_.size() - 1);
  return t;
}

FibTable FibTable::from_dense_entries(uint32_t width,
                                      std::vector<FibEntry> entries,
                                      uint32_t delta) {
  if (width == 0 || width > 32) throw ParseError("width must be in [1, 32]");
  FibTable t;
  t.width_ = width;
  t.delta_ = delta;
  t.source_labels_.resize(delta + 1);
  for (uint32_t i = 0; i <= delta; ++i) t.source_labels_[i] = i;
  t.entries_ = std::move(entries);
  for (const FibEntry& e : t.entries_) {
    if (e.prefix.len > width) throw ParseError("prefix length exceeds width");
    if (e.label == 0 || e.label > delta)
      throw ParseError("label outside the dense alphabet");
  }
  std::sort(t.entries_.begin(), t.entries_.end(),
            [](const FibEntry& a, const FibEntry& b) {
              return prefix_less(a.prefix, b.prefix);
            });
  for (size_t i = 1; i < t.entries_.size(); ++i)
    if (t.entries_[i].prefix == t.entries_[i - 1].prefix)
      throw ParseError("duplicate prefix");
  return t;
}

FibTable FibTable::parse(std::string_view text, uint32_t default_width) {
  uint32_t width = default_width;
  std::vector<std::pair<Prefix, uint32_t>> raw;
  size_t lineno = 0;
  size_t at = 0;
  bool first_content = true;
  while (at <= text.size()) {
    size_t nl = text.find('\n', at);
    std::string_view line = text.substr(
        at, nl == std::string_view::npos ? text.size() - at : nl - at);
    ++lineno;
    at = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

    std::string_view body = trim(line);
    if (!body.empty() && body[0] == '#') {
      // Header comments may carry the table width: "# width=4 ...".
      size_t w = body.find("width=");
      if (w != std::string_view::npos && first_content) {
        std::string_view tok = body.substr(w + 6);
        size_t end = tok.find_first_of(" \t");
        if (end != std::string_view::npos) tok = tok.substr(0, end);
        uint32_t parsed = 0;
        if (parse_u32(tok, parsed) && parsed >= 1 && parsed <= 32)
          width = parsed;
      }
      continue;
    }
    if (body.empty()) continue;
    first_content = false;

    size_t sp = body.find_first_of(" \t");
    if (sp == std::string_view::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected '<prefix>/<len> <label>'");
    std::string_view ptok = trim(body.substr(0, sp));
    std::string_view ltok = trim(body.substr(sp + 1));
    uint32_t label = 0;
    if (!parse_u32(ltok, label) || label == 0)
      throw ParseError("line " + std::to_string(lineno) +
                       ": label must be a positive integer");
    try {
      raw.emplace_back(parse_prefix(ptok, width), label);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  try {
    return from_entries(width, std::move(raw));
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()));
  }
}

std::string FibTable::serialize() const {
  std::string out;
  out += "# width=" + std::to_string(width_) +
         " entries=" + std::to_string(entries_.size()) +
         " labels=" + std::to_string(delta_) + "\n";
  for (const FibEntry& e : entries_) {
    out += format_prefix_at_width(e.prefix, width_);
    out += '/';
    out += std::to_string(e.prefix.len);
    out += ' ';
    out += std::to_string(source_labels_[e.label]);
    out += '\n';
  }
  return out;
}

Label FibTable::lookup(uint32_t addr) const {
  // Entries are sorted by length, so the last match is the longest one.
  Label best = kBot;
  for (const FibEntry& e : entries_)
    if (prefix_matches(e.prefix, addr, width_)) best = e.label;
  return best;
}

bool FibTable::contains(const Prefix& p) const {
  return label_of(p) != kNoLabel;
}

Label FibTable::label_of(const Prefix& p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                             [](const FibEntry& e, const Prefix& q) {
                               return prefix_less(e.prefix, q);
                             });
  if (it != entries_.end() && it->prefix == p) return it->label;
  return kNoLabel;
}

bool FibTable::operator==(const FibTable& o) const {
  if (width_ != o.width_ || entries_.size() != o.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].prefix == o.entries_[i].prefix)) return false;
    if (source_labels_[entries_[i].label] !=
        o.source_labels_[o.entries_[i].label])
      return false;
  }
  return true;
}

uint32_t parse_address(std::string_view token) {
  token = trim(token);
  if (token.find('.') != std::string_view::npos) {
    Prefix p = parse_prefix_body(token, 32, 32);
    return p.bits;
  }
  uint32_t v = 0;
  if (!parse_u32(token, v)) throw ParseError("bad address token");
  return v;
}

std::vector<uint32_t> parse_address_trace(std::string_view text) {
  std::vector<uint32_t> out;
  size_t at = 0;
  while (at <= text.size()) {
    size_t nl = text.find('\n', at);
    std::string_view line = text.substr(
        at, nl == std::string_view::npos ? text.size() - at : nl - at);
    at = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    std::string_view body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    out.push_back(parse_address(body));
  }
  return out;
}

}  // namespace fibc
