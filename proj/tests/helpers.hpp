#ifndef FIBC_TESTS_HELPERS_HPP
#define FIBC_TESTS_HELPERS_HPP

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fibc/fib.hpp"
#include "fibc/trie.hpp"

namespace fibc::testing {

// The running example table (width 4).
inline FibTable fig1a() {
  return FibTable::parse(
      "# width=4\n"
      "-/0 2\n"
      "0/1 3\n"
      "00/2 3\n"
      "001/3 2\n"
      "01/2 2\n"
      "011/3 1\n",
      4);
}

// The trie-folding example table (width 4), reconstructed from its figure.
inline FibTable fig3a() {
  return FibTable::parse(
      "# width=4\n"
      "-/0 1\n"
      "1/1 2\n"
      "01/2 3\n"
      "001/3 2\n"
      "100/3 1\n"
      "1100/4 1\n"
      "111/3 3\n",
      4);
}

// Random table of independent prefixes; roughly half the draws include a
// default route, so uncovered (no-route) paths get exercised too.
inline FibTable random_fib(uint64_t seed, uint32_t width, size_t max_entries,
                           uint32_t delta) {
  std::mt19937_64 rng(seed);
  size_t n = 1 + rng() % max_entries;
  if (width < 20) {
    uint64_t universe = (uint64_t{2} << width) - 1;  // all prefixes, any length
    n = size_t(std::min<uint64_t>(n, universe / 2 + 1));
  }
  std::set<std::pair<uint32_t, uint32_t>> seen;
  std::vector<std::pair<Prefix, uint32_t>> raw;
  bool with_default = rng() % 2 == 0;
  if (with_default) {
    raw.push_back({Prefix{0, 0}, uint32_t(1 + rng() % delta)});
    seen.insert({0, 0});
  }
  while (raw.size() < n) {
    uint32_t len = uint32_t(rng() % (width + 1));
    uint32_t bits = uint32_t(rng());
    if (width < 32) bits &= (uint32_t{1} << width) - 1;
    if (len == 0)
      bits = 0;
    else if (len < width)
      bits &= ~((uint32_t{1} << (width - len)) - 1);
    if (!seen.insert({len, bits}).second) continue;
    raw.push_back({Prefix{bits, len}, uint32_t(1 + rng() % delta)});
  }
  return FibTable::from_entries(width, std::move(raw));
}

inline bool tries_equal(const Trie& a, int32_t va, const Trie& b, int32_t vb) {
  if (a.node(va).label != b.node(vb).label) return false;
  for (int side = 0; side < 2; ++side) {
    int32_t ca = side ? a.node(va).right : a.node(va).left;
    int32_t cb = side ? b.node(vb).right : b.node(vb).left;
    if ((ca < 0) != (cb < 0)) return false;
    if (ca >= 0 && !tries_equal(a, ca, b, cb)) return false;
  }
  return true;
}

inline bool tries_equal(const Trie& a, const Trie& b) {
  return a.width() == b.width() && tries_equal(a, a.root(), b, b.root());
}

// Brute-force canonical folding: normalize every sub-trie rooted at the
// barrier level and count distinct sub-structures by string signature, plus
// the plain nodes above. Intentionally a separate implementation from the
// production fold (strings and a map instead of ids and hash-consing).
struct FoldOracle {
  std::map<std::string, int> sigs;

  std::string canon(const Trie& t, int32_t v, Label inherited) {
    Label lab = inherited;
    if (v >= 0 && t.node(v).label != kNoLabel) lab = t.node(v).label;
    std::string sig;
    if (v < 0 || t.is_leaf(v)) {
      sig = "L" + std::to_string(lab);
    } else {
      std::string l = canon(t, t.node(v).left, lab);
      std::string r = canon(t, t.node(v).right, lab);
      if (l == r && l[0] == 'L') return l;  // identical sibling leaves merge
      sig = "(" + l + "," + r + ")";
    }
    sigs[sig] = 1;
    return sig;
  }
};

inline uint64_t canonical_fold_count(const Trie& t, uint32_t lambda) {
  if (lambda >= t.width()) {
    // Degenerate barrier: the structure stays the plain trie.
    uint64_t count = 0;
    std::vector<int32_t> stack{t.root()};
    while (!stack.empty()) {
      int32_t v = stack.back();
      stack.pop_back();
      ++count;
      if (t.node(v).left >= 0) stack.push_back(t.node(v).left);
      if (t.node(v).right >= 0) stack.push_back(t.node(v).right);
    }
    return count;
  }
  FoldOracle oracle;
  uint64_t above = 0;
  struct Frame {
    int32_t v;
    uint32_t depth;
  };
  std::vector<Frame> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto [v, depth] = stack.back();
    stack.pop_back();
    if (depth == lambda) {
      oracle.canon(t, v, kBot);
      continue;
    }
    ++above;
    if (t.node(v).left >= 0) stack.push_back({t.node(v).left, depth + 1});
    if (t.node(v).right >= 0) stack.push_back({t.node(v).right, depth + 1});
  }
  return above + oracle.sigs.size();
}

// Second longest-prefix-match oracle: per-length membership probes, most
// specific first.
inline Label per_length_lookup(const FibTable& fib, uint32_t addr) {
  std::set<std::pair<uint32_t, uint32_t>> keys;
  for (const FibEntry& e : fib.entries())
    keys.insert({e.prefix.len, e.prefix.bits});
  for (int len = int(fib.width()); len >= 0; --len) {
    uint32_t bits = addr;
    if (len == 0)
      bits = 0;
    else if (uint32_t(len) < fib.width())
      bits &= ~((uint32_t{1} << (fib.width() - len)) - 1);
    if (keys.count({uint32_t(len), bits}))
      return fib.label_of(Prefix{bits, uint32_t(len)});
  }
  return kBot;
}

}  // namespace fibc::testing

#endif  // FIBC_TESTS_HELPERS_HPP
